#pragma once
// Exact integer arithmetic for the closed forms of the family
//   a(n+1) = n - a^(m)(n) + a^(m+1)(n),  a(1) = 1.
// Nothing here touches floating point.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace nestrec {

using Wide = boost::multiprecision::cpp_int;
using u128 = unsigned __int128;

/// Family parameter m >= 1.
class FamilyParams
{
public:
    explicit FamilyParams(std::int64_t m) : m_(m)
    {
        if (m < 1)
            throw std::invalid_argument("family parameter m must be >= 1, got " + std::to_string(m));
    }

    std::int64_t m() const noexcept { return m_; }

    friend bool operator==(const FamilyParams&, const FamilyParams&) = default;

private:
    std::int64_t m_;
};

namespace detail {

inline unsigned bit_length(u128 x)
{
    const auto hi = static_cast<std::uint64_t>(x >> 64);
    if (hi != 0)
        return 128u - static_cast<unsigned>(__builtin_clzll(hi));
    const auto lo = static_cast<std::uint64_t>(x);
    return lo == 0 ? 0u : 64u - static_cast<unsigned>(__builtin_clzll(lo));
}

inline unsigned bit_length(const Wide& x)
{
    return x.is_zero() ? 0u : static_cast<unsigned>(boost::multiprecision::msb(x)) + 1u;
}

// Newton descent from a seed 2^ceil(bits/2) >= sqrt(x). The iterates strictly
// decrease until they reach floor(sqrt(x)).
template <class T>
T newton_isqrt(const T& x)
{
    if (x < 2)
        return x;
    const unsigned bits = bit_length(x);
    T guess = T(1) << ((bits + 1) / 2);
    for (;;) {
        T next = (guess + x / guess) >> 1;
        if (next >= guess)
            return guess;
        guess = std::move(next);
    }
}

template <class Int>
void require_non_negative(const Int& x, const char* what)
{
    if (x < 0)
        throw std::domain_error(std::string(what) + ": negative argument");
}

// k(k-1)/2 with the even factor divided out before multiplying.
template <class Int>
Int half_pronic(const Int& k)
{
    if (k % 2 == 0)
        return (k / 2) * (k - 1);
    return k * ((k - 1) / 2);
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("int64 overflow in polygonal arithmetic");
    return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("int64 overflow in polygonal arithmetic");
    return r;
}

inline std::int64_t to_int64(const Wide& w)
{
    if (w > std::numeric_limits<std::int64_t>::max() || w < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("value does not fit in int64");
    return w.convert_to<std::int64_t>();
}

// floor((m - 2 + isqrt(D)) / (2m)) with D = (m-2)^2 + 8*m*x, x >= 0.
// Valid because floor((A + sqrt(D)) / B) = floor((A + floor(sqrt(D))) / B)
// for integer A and positive integer B.
inline Wide level_wide(std::int64_t m, const Wide& x)
{
    const Wide a = Wide(m) - 2;
    const Wide d = a * a + 8 * Wide(m) * x;
    const Wide s = newton_isqrt(d);
    return (a + s) / (2 * Wide(m));  // numerator >= 0, so truncation is floor
}

inline std::int64_t level_i64(std::int64_t m, std::int64_t x)
{
    constexpr std::int64_t kFastM = std::int64_t{1} << 40;
    constexpr std::int64_t kFastX = std::int64_t{1} << 62;
    if (m <= kFastM && x <= kFastX) {
        const auto a = static_cast<__int128>(m) - 2;
        const u128 d = static_cast<u128>(a * a) + static_cast<u128>(8) * static_cast<u128>(m) * static_cast<u128>(x);
        const auto s = static_cast<__int128>(newton_isqrt(d));
        return static_cast<std::int64_t>((a + s) / (2 * static_cast<__int128>(m)));
    }
    return to_int64(level_wide(m, Wide(x)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// isqrt

/// floor(sqrt(x)) for x >= 0; throws std::domain_error on negative input.
inline Wide isqrt(const Wide& x)
{
    detail::require_non_negative(x, "isqrt");
    return detail::newton_isqrt(x);
}

inline u128 isqrt(u128 x) { return detail::newton_isqrt(x); }

inline __int128 isqrt(__int128 x)
{
    detail::require_non_negative(x, "isqrt");
    return static_cast<__int128>(detail::newton_isqrt(static_cast<u128>(x)));
}

template <class T>
    requires(std::is_integral_v<T> && !std::is_same_v<T, bool>)
T isqrt(T x)
{
    if constexpr (std::is_signed_v<T>)
        detail::require_non_negative(x, "isqrt");
    return static_cast<T>(detail::newton_isqrt(static_cast<u128>(x)));
}

/// ceil(sqrt(x)) for x >= 0, derived from isqrt by an exact square test.
template <class T>
T ceil_sqrt(const T& x)
{
    T s = isqrt(x);
    if (s * s == x)
        return s;
    return s + 1;
}

// ---------------------------------------------------------------------------
// Polygonal boundaries and the closed forms.

/// m*k(k-1)/2 + k, the k-th generalized m-polygonal number (0 at k = 0).
template <class Int>
Int t_orig(const FamilyParams& params, const Int& k)
{
    detail::require_non_negative(k, "t_orig");
    if constexpr (std::is_integral_v<Int>) {
        const auto k64 = static_cast<std::int64_t>(k);
        const std::int64_t pronic_half =
            k64 % 2 == 0 ? detail::checked_mul(k64 / 2, k64 - 1) : detail::checked_mul(k64, (k64 - 1) / 2);
        return static_cast<Int>(detail::checked_add(detail::checked_mul(params.m(), pronic_half), k64));
    } else {
        return Int(params.m()) * detail::half_pronic(k) + k;
    }
}

/// First index n with h(n) = k, i.e. t_orig(k) + 1.
template <class Int>
Int t_star(const FamilyParams& params, const Int& k)
{
    if constexpr (std::is_integral_v<Int>)
        return static_cast<Int>(detail::checked_add(t_orig(params, static_cast<std::int64_t>(k)), 1));
    else
        return t_orig(params, k) + 1;
}

/// h_m^(0)(x): number of k >= 1 with t_orig(k) <= x. Each k >= 0 appears mk+1 times.
template <class Int>
Int h0_closed(const FamilyParams& params, const Int& x)
{
    detail::require_non_negative(x, "h0_closed");
    if constexpr (std::is_integral_v<Int>)
        return static_cast<Int>(detail::level_i64(params.m(), static_cast<std::int64_t>(x)));
    else
        return Int(detail::level_wide(params.m(), Wide(x)));
}

/// h(n) = h_m^(0)(n - 1) for n >= 1; h(1) = 0.
template <class Int>
Int h_closed(const FamilyParams& params, const Int& n)
{
    if (n < 1)
        throw std::domain_error("h_closed: n must be >= 1");
    return h0_closed(params, Int(n - 1));
}

/// a(n) = n - h(n), the solution with a(1) = 1.
template <class Int>
Int a_closed(const FamilyParams& params, const Int& n)
{
    if (n < 1)
        throw std::domain_error("a_closed: n must be >= 1");
    return n - h_closed(params, n);
}

/// True iff x = t_orig(k) for some k >= 1.
template <class Int>
bool in_s_prime(const FamilyParams& params, const Int& x)
{
    if (x < 1)
        return false;
    const Int k = h0_closed(params, x);
    return t_orig(params, k) == x;
}

/// h0 by bisection on t_orig instead of the square-root formula: the largest
/// k with t_orig(k) <= x. An independent route to h0_closed for 0 <= x < 2^62.
inline std::int64_t h0_search(const FamilyParams& params, std::int64_t x)
{
    detail::require_non_negative(x, "h0_search");
    const __int128 m = params.m();
    auto orig = [m](__int128 k) { return m * (k * (k - 1) / 2) + k; };
    // t_orig(k) >= k^2 / 2, so k < 2^33 covers every x below 2^62.
    __int128 lo = 0;
    __int128 hi = std::min<__int128>(static_cast<__int128>(x) + 1, __int128{1} << 33);
    while (lo < hi) {
        const __int128 mid = lo + (hi - lo + 1) / 2;
        if (orig(mid) <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    return static_cast<std::int64_t>(lo);
}

// ---------------------------------------------------------------------------

/// Boundary indices t_star[k] = t_orig[k] + 1 for every k with t_star[k] <= max_n,
/// plus the first boundary past max_n so that level(max_n) is decidable.
/// Immutable after construction.
class BoundarySchedule
{
public:
    BoundarySchedule(const FamilyParams& params, std::int64_t max_n) : params_(params), max_n_(max_n)
    {
        if (max_n < 1)
            throw std::invalid_argument("boundary_schedule: max_n must be >= 1");
        for (std::int64_t k = 0;; ++k) {
            const std::int64_t orig = nestrec::t_orig(params, k);
            t_orig_.push_back(orig);
            t_star_.push_back(orig + 1);
            if (orig + 1 > max_n)
                break;
        }
    }

    const FamilyParams& params() const noexcept { return params_; }
    std::int64_t max_n() const noexcept { return max_n_; }
    const std::vector<std::int64_t>& t_orig() const noexcept { return t_orig_; }
    const std::vector<std::int64_t>& t_star() const noexcept { return t_star_; }
    std::size_t size() const noexcept { return t_star_.size(); }

    /// N_k = mk + 1.
    std::int64_t frequency(std::int64_t k) const { return detail::checked_add(detail::checked_mul(params_.m(), k), 1); }

    /// The unique k with t_star[k] <= n < t_star[k+1], by binary search.
    /// Defined for 1 <= n <= max_n.
    std::int64_t level(std::int64_t n) const
    {
        if (n < 1 || n > max_n_)
            throw std::out_of_range("BoundarySchedule::level: n outside [1, max_n]");
        const auto it = std::upper_bound(t_star_.begin(), t_star_.end(), n);
        return static_cast<std::int64_t>(it - t_star_.begin()) - 1;
    }

private:
    FamilyParams params_;
    std::int64_t max_n_;
    std::vector<std::int64_t> t_orig_;
    std::vector<std::int64_t> t_star_;
};

inline BoundarySchedule boundary_schedule(const FamilyParams& params, std::int64_t max_n)
{
    return BoundarySchedule(params, max_n);
}

}  // namespace nestrec
