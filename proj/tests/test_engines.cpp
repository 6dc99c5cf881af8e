#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <limits>
#include <vector>

#include "nestrec/engines.hpp"
#include "oracles.hpp"

using namespace nestrec;
using V = std::vector<std::int64_t>;

TEST_CASE("gen_increment examples", "[engines]")
{
    CHECK(gen_increment(FamilyParams(1), 6).values() == V{1, 1, 2, 2, 3, 4});
    CHECK(gen_increment(FamilyParams(2), 10).values() == V{1, 1, 2, 3, 3, 4, 5, 6, 7, 7});
    for (std::int64_t m = 1; m <= 8; ++m)
        CHECK(gen_increment(FamilyParams(m), 1).values() == V{1});
    CHECK_THROWS_AS(gen_increment(FamilyParams(1), 0), std::invalid_argument);
}

TEST_CASE("gen_nested examples", "[engines]")
{
    CHECK(gen_nested(FamilyParams(1), 5).values() == V{1, 1, 2, 2, 3});
    CHECK(gen_nested(FamilyParams(2), 10).values() == gen_increment(FamilyParams(2), 10).values());
    for (std::int64_t m = 1; m <= 8; ++m)
        CHECK(gen_nested(FamilyParams(m), 1).values() == V{1});
    CHECK_THROWS_AS(gen_nested(FamilyParams(1), 0), std::invalid_argument);
}

TEST_CASE("gen_closed examples", "[engines]")
{
    CHECK(gen_closed(FamilyParams(1), 6).values() == V{1, 1, 2, 2, 3, 4});
    CHECK(gen_closed(FamilyParams(3), 5).values() == V{1, 1, 2, 3, 4});
    CHECK(gen_closed(FamilyParams(8), 2).values() == V{1, 1});
}

TEST_CASE("table provenance", "[engines]")
{
    const auto t = gen_nested(FamilyParams(3), 10);
    CHECK(t.kind() == TableKind::Canonical);
    CHECK(t.engine() == Engine::Nested);
    CHECK(t.start_index() == 1);
    CHECK(t.last_index() == 10);
    CHECK(t.m() == 3);
    CHECK(gen_closed(FamilyParams(3), 10).engine() == Engine::ClosedForm);
    CHECK(gen_increment(FamilyParams(3), 10).engine() == Engine::Increment);
    CHECK_THROWS_AS(t.at(11), IterateOutOfRange);
    CHECK_THROWS_AS(t.at(0), IterateOutOfRange);
}

TEST_CASE("iterate examples", "[engines]")
{
    const auto t2 = gen_nested(FamilyParams(2), 20);
    CHECK(iterate(t2, 2, 4) == 2);
    CHECK(iterate(t2, 0, 7) == 7);
    const auto t1 = gen_nested(FamilyParams(1), 20);
    CHECK(iterate(t1, 5, 1) == 1);
    CHECK_THROWS_AS(iterate(t1, 0, 21), IterateOutOfRange);
    CHECK_THROWS_AS(iterate(t1, -1, 3), std::invalid_argument);
}

TEST_CASE("three engines agree up to 10^5", "[engines][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const FamilyParams p(m);
        const auto nested = gen_nested(p, 100'000);
        const auto inc = gen_increment(p, 100'000);
        const auto closed = gen_closed(p, 100'000, 4);
        REQUIRE(nested.same_values(inc));
        REQUIRE(nested.same_values(closed));
    }
}

TEST_CASE("reuse of the m-chain matches two independent chains", "[engines][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m)
        REQUIRE(gen_nested(FamilyParams(m), 10'000).values() == oracle::nested_no_reuse(m, 10'000));
}

TEST_CASE("closed-form engine is independent of the worker count", "[engines]")
{
    const FamilyParams p(5);
    const auto one = gen_closed(p, 12'345, 1);
    for (unsigned jobs : {2u, 3u, 7u, 0u})
        REQUIRE(gen_closed(p, 12'345, jobs).values() == one.values());
}

TEST_CASE("canonical tables are slowly growing and bounded by n", "[engines][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const auto t = gen_nested(FamilyParams(m), 50'000);
        REQUIRE(t[1] == 1);
        for (std::int64_t n = 1; n <= t.last_index(); ++n) {
            REQUIRE(t[n] >= 1);
            REQUIRE(t[n] <= n);
            if (n > 1) {
                const auto d = t[n] - t[n - 1];
                REQUIRE((d == 0 || d == 1));
            }
        }
    }
}

TEST_CASE("iterates are monotone in n and stay inside every prefix", "[engines][property]")
{
    for (std::int64_t m = 1; m <= 8; ++m) {
        const auto t = gen_nested(FamilyParams(m), 20'000);
        for (std::int64_t j = 0; j <= m + 1; ++j) {
            std::int64_t prev = iterate(t, j, 1);
            for (std::int64_t n = 2; n <= t.last_index(); ++n) {
                const std::int64_t cur = iterate(t, j, n);
                REQUIRE(cur >= prev);
                REQUIRE(cur <= n);
                prev = cur;
            }
        }
    }
}

TEST_CASE("wide tables match machine-width tables", "[engines]")
{
    for (std::int64_t m : {1, 2, 5}) {
        const FamilyParams p(m);
        const auto narrow = gen_nested(p, 3000);
        for (Engine e : {Engine::Nested, Engine::Increment, Engine::ClosedForm}) {
            const auto wide = generate<Wide>(e, p, 3000, 2);
            REQUIRE(wide.size() == narrow.size());
            for (std::int64_t n = 1; n <= 3000; ++n)
                REQUIRE(wide[n] == narrow[n]);
        }
    }
}

TEST_CASE("machine-width tables refuse sizes past the overflow cap", "[engines]")
{
    CHECK_THROWS_AS(gen_increment(FamilyParams(1), std::numeric_limits<std::int64_t>::max() / 2 + 1),
                    std::length_error);
}
