#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>

#include "nestrec/exact_arith.hpp"
#include "oracles.hpp"

using namespace nestrec;

namespace {

Wide random_wide(std::mt19937_64& rng, unsigned bits)
{
    Wide x = 0;
    for (unsigned got = 0; got < bits; got += 64)
        x = (x << 64) | Wide(rng());
    return x >> ((bits + 63) / 64 * 64 - bits);
}

u128 random_u128(std::mt19937_64& rng)
{
    const unsigned shift = static_cast<unsigned>(rng() % 128);
    const u128 x = (static_cast<u128>(rng()) << 64) | rng();
    return x >> shift;  // spread across bit lengths
}

Wide to_wide(u128 x)
{
    return (Wide(static_cast<std::uint64_t>(x >> 64)) << 64) | Wide(static_cast<std::uint64_t>(x));
}

}  // namespace

TEST_CASE("FamilyParams rejects m < 1", "[exact-arith]")
{
    CHECK_THROWS_AS(FamilyParams(0), std::invalid_argument);
    CHECK_THROWS_AS(FamilyParams(-3), std::invalid_argument);
    CHECK(FamilyParams(1).m() == 1);
}

TEST_CASE("isqrt examples", "[exact-arith][isqrt]")
{
    CHECK(isqrt(std::int64_t{0}) == 0);
    CHECK(isqrt(std::int64_t{16}) == 4);
    CHECK(isqrt(std::int64_t{15}) == 3);

    const std::int64_t x = 1'000'000'000'000'000'000 + 1'000'000'000;
    const Wide s = isqrt(x);
    CHECK(s * s <= x);
    CHECK((s + 1) * (s + 1) > x);
    CHECK(s == 1'000'000'000);
}

TEST_CASE("isqrt rejects negative input", "[exact-arith][isqrt]")
{
    CHECK_THROWS_AS(isqrt(std::int64_t{-1}), std::domain_error);
    CHECK_THROWS_AS(isqrt(Wide(-5)), std::domain_error);
    CHECK_THROWS_AS(isqrt(static_cast<__int128>(-2)), std::domain_error);
}

TEST_CASE("isqrt satisfies s^2 <= x < (s+1)^2 for every x up to 10^6", "[exact-arith][isqrt][property]")
{
    for (std::uint64_t x = 0; x <= 1'000'000; ++x) {
        const std::uint64_t s = isqrt(x);
        REQUIRE(s * s <= x);
        REQUIRE((s + 1) * (s + 1) > x);
    }
}

TEST_CASE("isqrt agrees with bisection on random 128-bit and wide inputs", "[exact-arith][isqrt][property]")
{
    std::mt19937_64 rng(0x5eed'1234);
    for (int i = 0; i < 1000; ++i) {
        const u128 x = random_u128(rng);
        const Wide s = to_wide(isqrt(x));
        const Wide wx = to_wide(x);
        REQUIRE(s * s <= wx);
        REQUIRE((s + 1) * (s + 1) > wx);
        REQUIRE(s == oracle::isqrt_bisect(wx));
    }
    // the top of the u128 range
    const u128 top = ~u128{0};
    CHECK(to_wide(isqrt(top)) == oracle::isqrt_bisect(to_wide(top)));

    for (int i = 0; i < 200; ++i) {
        const Wide x = random_wide(rng, 64 + static_cast<unsigned>(rng() % 450));
        const Wide s = isqrt(x);
        REQUIRE(s * s <= x);
        REQUIRE((s + 1) * (s + 1) > x);
    }
    for (std::uint64_t x : {0ull, 1ull, 2ull, 3ull, 4ull, 99ull, 100ull, 101ull, (1ull << 62) - 1, 1ull << 62})
        CHECK(isqrt(x) == oracle::isqrt_bisect(x));
}

TEST_CASE("perfect squares and their neighbours", "[exact-arith][isqrt]")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const Wide k = random_wide(rng, 1 + static_cast<unsigned>(rng() % 200));
        const Wide sq = k * k;
        REQUIRE(isqrt(sq) == k);
        if (sq > 0)
            REQUIRE(isqrt(Wide(sq - 1)) == k - 1);
        REQUIRE(isqrt(Wide(sq + 2 * k)) == k);
    }
}

TEST_CASE("ceil(sqrt(n)) - 1 == floor(sqrt(n - 1)) for n up to 10^6", "[exact-arith][property]")
{
    for (std::int64_t n = 1; n <= 1'000'000; ++n)
        REQUIRE(ceil_sqrt(n) - 1 == isqrt(n - 1));
}

TEST_CASE("floor((A + sqrt(D)) / B) may use floor(sqrt(D))", "[exact-arith][property]")
{
    // q = floor((A + s) / B) must satisfy q*B - A <= sqrt(D) < (q+1)*B - A,
    // checked without square roots: compare squares of the bounds with D.
    std::mt19937_64 rng(42);
    auto floor_div = [](const Wide& a, const Wide& b) {
        Wide q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0)))
            --q;
        return q;
    };
    for (int i = 0; i < 5000; ++i) {
        const Wide a = Wide(static_cast<std::int64_t>(rng() % 2001) - 1000);
        const Wide b = Wide(1 + static_cast<std::int64_t>(rng() % 1000));
        const Wide d = random_wide(rng, 1 + static_cast<unsigned>(rng() % 100));
        const Wide s = isqrt(d);
        const Wide q = floor_div(a + s, b);
        const Wide lower = q * b - a;
        const Wide upper = (q + 1) * b - a;
        REQUIRE((lower <= 0 || lower * lower <= d));
        REQUIRE(upper > 0);
        REQUIRE(d < upper * upper);
    }
}

TEST_CASE("t_orig examples and overflow", "[exact-arith]")
{
    CHECK(t_orig(FamilyParams(1), std::int64_t{3}) == 6);
    CHECK(t_orig(FamilyParams(2), std::int64_t{3}) == 9);
    CHECK(t_orig(FamilyParams(5), std::int64_t{0}) == 0);
    CHECK(t_orig(FamilyParams(3), Wide(4)) == 22);
    CHECK_THROWS_AS(t_orig(FamilyParams(1000), std::int64_t{1} << 40), std::overflow_error);
    CHECK(t_orig(FamilyParams(1000), Wide(std::int64_t{1} << 40)) ==
          Wide(1000) * (Wide(std::int64_t{1} << 40) * ((std::int64_t{1} << 40) - 1) / 2) + (std::int64_t{1} << 40));
}

TEST_CASE("h_closed, h0_closed and a_closed examples", "[exact-arith]")
{
    CHECK(h_closed(FamilyParams(1), std::int64_t{6}) == 2);
    CHECK(h_closed(FamilyParams(2), std::int64_t{10}) == 3);
    CHECK(h_closed(FamilyParams(3), std::int64_t{1}) == 0);
    CHECK_THROWS_AS(h_closed(FamilyParams(3), std::int64_t{0}), std::domain_error);

    CHECK(h0_closed(FamilyParams(2), std::int64_t{4}) == 2);
    CHECK(h0_closed(FamilyParams(1), std::int64_t{0}) == 0);
    CHECK_THROWS_AS(h0_closed(FamilyParams(1), std::int64_t{-1}), std::domain_error);

    CHECK(a_closed(FamilyParams(1), std::int64_t{6}) == 4);
    CHECK(a_closed(FamilyParams(2), std::int64_t{5}) == 3);
    for (std::int64_t m = 1; m <= 8; ++m)
        CHECK(a_closed(FamilyParams(m), std::int64_t{1}) == 1);
    CHECK_THROWS_AS(a_closed(FamilyParams(1), std::int64_t{0}), std::domain_error);

    const std::int64_t h_m1[] = {0, 1, 1, 2, 2, 2};
    const std::int64_t a_m1[] = {1, 1, 2, 2, 3, 4};
    for (std::int64_t n = 1; n <= 6; ++n) {
        CHECK(h_closed(FamilyParams(1), n) == h_m1[n - 1]);
        CHECK(a_closed(FamilyParams(1), n) == a_m1[n - 1]);
    }
}

TEST_CASE("h(n) = h0(n - 1) for n up to 10^4", "[exact-arith][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const FamilyParams p(m);
        for (std::int64_t n = 1; n <= 10'000; ++n)
            REQUIRE(h0_closed(p, n - 1) == h_closed(p, n));
    }
}

TEST_CASE("in_s_prime examples", "[exact-arith]")
{
    CHECK(in_s_prime(FamilyParams(2), std::int64_t{9}));
    CHECK_FALSE(in_s_prime(FamilyParams(1), std::int64_t{5}));
    CHECK(in_s_prime(FamilyParams(4), std::int64_t{1}));
    CHECK_FALSE(in_s_prime(FamilyParams(4), std::int64_t{0}));
}

TEST_CASE("in_s_prime matches direct enumeration", "[exact-arith][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const auto poly = oracle::polygonal_set(m, 50'000);
        for (std::int64_t x = 1; x <= 50'000; ++x)
            REQUIRE(in_s_prime(FamilyParams(m), x) == (poly.count(x) == 1));
    }
}

TEST_CASE("boundary_schedule examples", "[exact-arith][schedule]")
{
    using V = std::vector<std::int64_t>;
    CHECK(boundary_schedule(FamilyParams(1), 7).t_star() == V{1, 2, 4, 7, 11});
    CHECK(boundary_schedule(FamilyParams(2), 10).t_star() == V{1, 2, 5, 10, 17});
    CHECK(boundary_schedule(FamilyParams(3), 1).t_star() == V{1, 2});
    CHECK(boundary_schedule(FamilyParams(2), 10).t_orig() == V{0, 1, 4, 9, 16});
    CHECK_THROWS_AS(boundary_schedule(FamilyParams(2), 0), std::invalid_argument);
}

TEST_CASE("boundary_schedule invariants", "[exact-arith][schedule][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const auto s = boundary_schedule(FamilyParams(m), 100'000);
        REQUIRE(s.t_star().back() > 100'000);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const auto kk = static_cast<std::int64_t>(k);
            REQUIRE(s.t_orig()[k] == m * kk * (kk - 1) / 2 + kk);
            REQUIRE(s.t_star()[k] == s.t_orig()[k] + 1);
            if (k + 1 < s.size())
                REQUIRE(s.t_star()[k + 1] - s.t_star()[k] == s.frequency(kk));
        }
    }
}

TEST_CASE("h_closed equals the schedule bisection and the t_orig bisection", "[exact-arith][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const FamilyParams p(m);
        const auto s = boundary_schedule(p, 100'000);
        for (std::int64_t n = 1; n <= 100'000; ++n) {
            const std::int64_t h = h_closed(p, n);
            REQUIRE(h == s.level(n));
            REQUIRE(h == h0_search(p, n - 1));
        }
    }
}

TEST_CASE("h steps by 0 or 1, stepping exactly at boundaries", "[exact-arith][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const FamilyParams p(m);
        const auto s = boundary_schedule(p, 100'000);
        const std::set<std::int64_t> starts(s.t_star().begin() + 1, s.t_star().end());
        for (std::int64_t n = 2; n <= 100'000; ++n) {
            const std::int64_t step = h_closed(p, n) - h_closed(p, n - 1);
            REQUIRE((step == 0 || step == 1));
            REQUIRE((step == 1) == (starts.count(n) == 1));
        }
    }
}

TEST_CASE("value k occupies exactly mk + 1 indices", "[exact-arith][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const FamilyParams p(m);
        for (std::int64_t k = 0; k <= 1000; ++k) {
            const std::int64_t first = t_star(p, k);
            const std::int64_t next = t_star(p, k + 1);
            REQUIRE(next - first == m * k + 1);
            REQUIRE(h_closed(p, first) == k);
            REQUIRE(h_closed(p, next - 1) == k);
            REQUIRE(h_closed(p, next) == k + 1);
            if (k > 0)
                REQUIRE(h_closed(p, first - 1) == k - 1);
        }
    }
}

TEST_CASE("a(n) = 1 + #{x < n : x not polygonal}", "[exact-arith][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const auto expected = oracle::a_by_counting(m, 20'000);
        for (std::int64_t n = 1; n <= 20'000; ++n)
            REQUIRE(a_closed(FamilyParams(m), n) == expected[static_cast<std::size_t>(n - 1)]);
    }
}

TEST_CASE("wide closed forms stay exact past the int64 range", "[exact-arith]")
{
    std::mt19937_64 rng(99);
    for (std::int64_t m : {1, 2, 3, 7, 1000}) {
        const FamilyParams p(m);
        for (int i = 0; i < 50; ++i) {
            const Wide n = random_wide(rng, 100 + static_cast<unsigned>(rng() % 60)) + 1;
            const Wide h = h_closed(p, n);
            REQUIRE(t_star(p, h) <= n);
            REQUIRE(n < t_star(p, Wide(h + 1)));
        }
        for (std::int64_t n : {1ll, 2ll, 1000ll, 123456789ll, 4'000'000'000'000'000'000ll}) {
            REQUIRE(Wide(h_closed(p, n)) == h_closed(p, Wide(n)));
            REQUIRE(h_closed(p, n) == h0_search(p, n - 1));
        }
    }
}
