#pragma once
// Bounded machine checks of the identities behind the solution a(n) = n - h(n).
// Every sweep walks n upward, so "first counterexample" is well defined even
// when the range is split across workers.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nestrec/check_report.hpp"
#include "nestrec/engines.hpp"
#include "nestrec/exact_arith.hpp"
#include "nestrec/parallel.hpp"

namespace nestrec {

/// Where the checks obtain h: the closed form, or h(n) = n - a(n) read off the table.
enum class HSource { Closed, Table };

namespace detail {

struct SweepResult
{
    std::optional<Counterexample> first;
    CaseCounts counts;
};

// body(n, counts) returns a counterexample or nullopt. Each chunk stops at its
// own first failure; the merged result keeps the smallest n.
template <class Body>
SweepResult sweep(std::int64_t lo, std::int64_t hi, unsigned jobs, Body&& body)
{
    SweepResult merged;
    std::mutex mu;
    for_each_chunk(lo, hi, jobs, [&](std::int64_t chunk_lo, std::int64_t chunk_hi, std::size_t) {
        SweepResult local;
        for (std::int64_t n = chunk_lo; n <= chunk_hi; ++n) {
            if (auto c = body(n, local.counts)) {
                local.first = std::move(c);
                break;
            }
        }
        std::lock_guard lock(mu);
        for (const auto& [key, value] : local.counts)
            merged.counts[key] += value;
        if (local.first && (!merged.first || local.first->n < merged.first->n))
            merged.first = std::move(local.first);
    });
    return merged;
}

inline void require_same_family(const FamilyParams& params, const SeqTable& table)
{
    if (params != table.params())
        throw std::invalid_argument("table was built for a different m");
}

inline void require_canonical(const SeqTable& table)
{
    if (table.kind() != TableKind::Canonical || table.start_index() != 1)
        throw std::invalid_argument("check requires a canonical table starting at a(1)");
}

class HOracle
{
public:
    HOracle(const FamilyParams& params, const SeqTable& table, HSource source)
        : params_(params), table_(table), source_(source)
    {}

    std::int64_t operator()(std::int64_t n) const
    {
        if (source_ == HSource::Closed)
            return h_closed(params_, n);
        return n - table_.at(n);
    }

private:
    const FamilyParams& params_;
    const SeqTable& table_;
    HSource source_;
};

inline std::string str(std::int64_t v) { return std::to_string(v); }

}  // namespace detail

/// Consecutive differences lie in {0, 1}, and are 0 exactly at the polygonal
/// numbers: at n in S'_m for canonical tables, at n + 1 in S'_m for the
/// zero-indexed table (where a(x) = x - h0(x)).
inline CheckReport check_slow_growth(const SeqTable& table)
{
    if (table.kind() == TableKind::Variant)
        throw std::invalid_argument("check_slow_growth applies to canonical or zero-indexed tables");
    const FamilyParams& params = table.params();
    const std::int64_t shift = table.kind() == TableKind::ZeroIndexed ? 1 : 0;

    CheckReport report{"slow_growth", params.m(), table.start_index(), table.last_index(), {}, CaseCounts{}};
    auto& counts = *report.case_counts;
    counts["step0"] = 0;
    counts["step1"] = 0;
    for (std::int64_t n = table.start_index(); n < table.last_index(); ++n) {
        const std::int64_t diff = table[n + 1] - table[n];
        const std::string values = "a(" + detail::str(n) + ")=" + detail::str(table[n]) + ", a(" +
                                   detail::str(n + 1) + ")=" + detail::str(table[n + 1]);
        if (diff != 0 && diff != 1) {
            report.counterexample = Counterexample{n, "0 or 1", detail::str(diff), values};
            break;
        }
        const std::int64_t expected = in_s_prime(params, n + shift) ? 0 : 1;
        if (diff != expected) {
            report.counterexample = Counterexample{n, detail::str(expected), detail::str(diff),
                                                   values + "; step disagrees with polygonal membership"};
            break;
        }
        ++counts[diff == 0 ? "step0" : "step1"];
    }
    return report;
}

/// h(n+1) - 1 == h(a^(m)(n)) for 1 <= n < table end. Each n is tallied as
/// "boundary" (n = T*_{k+1} - 1, i.e. n is polygonal) or "interior".
inline CheckReport check_key_identity(const FamilyParams& params, const SeqTable& table,
                                      HSource source = HSource::Closed, unsigned jobs = 1)
{
    detail::require_same_family(params, table);
    detail::require_canonical(table);
    const detail::HOracle h(params, table, source);
    const std::int64_t hi = table.last_index() - 1;

    auto result = detail::sweep(1, hi, jobs, [&](std::int64_t n, CaseCounts& counts) -> std::optional<Counterexample> {
        const std::int64_t lhs = h(n + 1) - 1;
        const std::int64_t x = iterate(table, params.m(), n);
        const std::int64_t rhs = h(x);
        const bool boundary = in_s_prime(params, n);
        if (!boundary && h(n) < 1)
            return Counterexample{n, "h(n) >= 1 for an interior n", detail::str(h(n)), "case dichotomy violated"};
        if (lhs != rhs)
            return Counterexample{n, detail::str(lhs), detail::str(rhs),
                                  std::string(boundary ? "boundary" : "interior") + " case; a^(m)(n)=" + detail::str(x)};
        ++counts[boundary ? "boundary" : "interior"];
        return std::nullopt;
    });
    result.counts.try_emplace("boundary", 0);
    result.counts.try_emplace("interior", 0);
    return CheckReport{"key_identity", params.m(), 1, hi, std::move(result.first), std::move(result.counts)};
}

namespace detail {

inline std::optional<Counterexample> p1_at(const FamilyParams& params, const SeqTable& table, const HOracle& h,
                                           std::int64_t k)
{
    const std::int64_t arg = t_star(params, k + 1) - 1;
    for (std::int64_t j = 0; j <= params.m(); ++j) {
        const std::int64_t x = iterate(table, j, arg);
        if (h(x) != k)
            return Counterexample{arg, str(k), str(h(x)),
                                  "k=" + str(k) + " j=" + str(j) + " a^(j)(n)=" + str(x)};
    }
    const std::int64_t end = iterate(table, params.m(), arg);
    const std::int64_t target = t_star(params, k);
    if (end != target)
        return Counterexample{arg, str(target), str(end), "k=" + str(k) + " a^(m)(T*_{k+1}-1) != T*_k"};
    return std::nullopt;
}

inline std::optional<Counterexample> p2_at(const FamilyParams& params, const SeqTable& table, const HOracle& h,
                                           std::int64_t k)
{
    const std::int64_t arg = t_star(params, k);
    for (std::int64_t j = 1; j <= params.m(); ++j) {
        const std::int64_t x = iterate(table, j, arg);
        if (h(x) != k - 1)
            return Counterexample{arg, str(k - 1), str(h(x)),
                                  "k=" + str(k) + " j=" + str(j) + " a^(j)(n)=" + str(x)};
    }
    const std::int64_t end = iterate(table, params.m(), arg);
    const std::int64_t target = t_star(params, k - 1);
    if (end != target)
        return Counterexample{arg, str(target), str(end), "k=" + str(k) + " a^(m)(T*_k) != T*_{k-1}"};
    return std::nullopt;
}

}  // namespace detail

/// Upper boundary chain at n = T*_{k+1} - 1: h(a^(j)(n)) = k for j = 0..m and a^(m)(n) = T*_k.
inline CheckReport check_boundary_p1(const FamilyParams& params, const SeqTable& table, std::int64_t k,
                                     HSource source = HSource::Closed)
{
    detail::require_same_family(params, table);
    detail::require_canonical(table);
    if (k < 0)
        throw std::invalid_argument("check_boundary_p1: k must be >= 0");
    const std::int64_t arg = t_star(params, k + 1) - 1;
    if (!table.contains(arg))
        throw std::out_of_range("check_boundary_p1: T*_{k+1} - 1 outside the table");
    const detail::HOracle h(params, table, source);
    return CheckReport{"boundary_p1", params.m(), arg, arg, detail::p1_at(params, table, h, k), std::nullopt};
}

/// Lower boundary chain at n = T*_k (k >= 1): h(a^(j)(n)) = k - 1 for j = 1..m and a^(m)(n) = T*_{k-1}.
inline CheckReport check_boundary_p2(const FamilyParams& params, const SeqTable& table, std::int64_t k,
                                     HSource source = HSource::Closed)
{
    detail::require_same_family(params, table);
    detail::require_canonical(table);
    if (k < 1)
        throw std::invalid_argument("check_boundary_p2: k must be >= 1");
    const std::int64_t arg = t_star(params, k);
    if (!table.contains(arg))
        throw std::out_of_range("check_boundary_p2: T*_k outside the table");
    const detail::HOracle h(params, table, source);
    return CheckReport{"boundary_p2", params.m(), arg, arg, detail::p2_at(params, table, h, k), std::nullopt};
}

/// check_boundary_p1 for every k whose argument T*_{k+1} - 1 lies in the table.
inline CheckReport check_boundary_p1_all(const FamilyParams& params, const SeqTable& table,
                                         HSource source = HSource::Closed, unsigned jobs = 1)
{
    detail::require_same_family(params, table);
    detail::require_canonical(table);
    const detail::HOracle h(params, table, source);
    // k ranges over 0..k_max with t_star(k+1) - 1 <= last.
    std::int64_t k_max = -1;
    while (t_star(params, k_max + 2) - 1 <= table.last_index())
        ++k_max;
    auto result = detail::sweep(0, k_max, jobs, [&](std::int64_t k, CaseCounts& counts) {
        auto c = detail::p1_at(params, table, h, k);
        if (!c)
            ++counts["k_checked"];
        return c;
    });
    result.counts.try_emplace("k_checked", 0);
    return CheckReport{"boundary_p1", params.m(), 1, table.last_index(), std::move(result.first),
                       std::move(result.counts)};
}

/// check_boundary_p2 for every k >= 1 with T*_k in the table.
inline CheckReport check_boundary_p2_all(const FamilyParams& params, const SeqTable& table,
                                         HSource source = HSource::Closed, unsigned jobs = 1)
{
    detail::require_same_family(params, table);
    detail::require_canonical(table);
    const detail::HOracle h(params, table, source);
    std::int64_t k_max = 0;
    while (t_star(params, k_max + 1) <= table.last_index())
        ++k_max;
    auto result = detail::sweep(1, k_max, jobs, [&](std::int64_t k, CaseCounts& counts) {
        auto c = detail::p2_at(params, table, h, k);
        if (!c)
            ++counts["k_checked"];
        return c;
    });
    result.counts.try_emplace("k_checked", 0);
    return CheckReport{"boundary_p2", params.m(), 1, table.last_index(), std::move(result.first),
                       std::move(result.counts)};
}

/// Every complete run of h (all but the last, which the table end may cut
/// short) has value k and length mk + 1, with k = 0, 1, 2, ... in order.
inline CheckReport check_frequency(const FamilyParams& params, const SeqTable& table, HSource source = HSource::Closed)
{
    detail::require_same_family(params, table);
    detail::require_canonical(table);
    const detail::HOracle h(params, table, source);
    CheckReport report{"frequency", params.m(), 1, table.last_index(), {}, CaseCounts{{"complete_runs", 0}}};

    std::int64_t run_value = h(1);
    std::int64_t run_start = 1;
    if (run_value != 0) {
        report.counterexample = Counterexample{1, "0", detail::str(run_value), "h(1)"};
        return report;
    }
    for (std::int64_t n = 2; n <= table.last_index(); ++n) {
        const std::int64_t v = h(n);
        if (v == run_value)
            continue;
        const std::int64_t length = n - run_start;
        const std::int64_t expected = params.m() * run_value + 1;
        if (length != expected) {
            report.counterexample = Counterexample{run_start, detail::str(expected), detail::str(length),
                                                   "run of value " + detail::str(run_value)};
            return report;
        }
        if (v != run_value + 1) {
            report.counterexample = Counterexample{n, detail::str(run_value + 1), detail::str(v), "h skipped a value"};
            return report;
        }
        ++(*report.case_counts)["complete_runs"];
        run_value = v;
        run_start = n;
    }
    return report;
}

/// Differential check of the three engines on a(1..n_max). `closed_form` maps n
/// to the closed-form a(n); swapping it is how the mutation tests sabotage one route.
template <class ClosedForm>
CheckReport cross_check(const FamilyParams& params, std::int64_t n_max, unsigned jobs, ClosedForm&& closed_form)
{
    const SeqTable nested = gen_nested(params, n_max);
    const SeqTable increment = gen_increment(params, n_max);
    std::vector<std::int64_t> closed(static_cast<std::size_t>(n_max));
    for_each_chunk(1, n_max, jobs, [&](std::int64_t lo, std::int64_t hi, std::size_t) {
        for (std::int64_t n = lo; n <= hi; ++n)
            closed[static_cast<std::size_t>(n - 1)] = closed_form(n);
    });

    auto result = detail::sweep(1, n_max, jobs, [&](std::int64_t n, CaseCounts&) -> std::optional<Counterexample> {
        const std::int64_t a_nested = nested[n];
        const std::int64_t a_inc = increment[n];
        const std::int64_t a_closed_v = closed[static_cast<std::size_t>(n - 1)];
        if (a_nested == a_inc && a_inc == a_closed_v)
            return std::nullopt;
        return Counterexample{n, detail::str(a_nested), a_inc != a_nested ? detail::str(a_inc) : detail::str(a_closed_v),
                              "nested=" + detail::str(a_nested) + " increment=" + detail::str(a_inc) +
                                  " closed=" + detail::str(a_closed_v)};
    });
    return CheckReport{"cross_check", params.m(), 1, n_max, std::move(result.first), std::nullopt};
}

inline CheckReport cross_check(const FamilyParams& params, std::int64_t n_max, unsigned jobs = 1)
{
    return cross_check(params, n_max, jobs, [&params](std::int64_t n) { return a_closed(params, n); });
}

/// Compare a candidate h(n) against bisection on the polygonal numbers over
/// [n_lo, n_hi]. Reaches indices far beyond any materialized table.
template <class HFormula>
CheckReport check_closed_form_window(const FamilyParams& params, std::int64_t n_lo, std::int64_t n_hi,
                                     HFormula&& h_formula, unsigned jobs = 1)
{
    if (n_lo < 1 || n_hi < n_lo)
        throw std::invalid_argument("check_closed_form_window: need 1 <= n_lo <= n_hi");
    auto result = detail::sweep(n_lo, n_hi, jobs, [&](std::int64_t n, CaseCounts&) -> std::optional<Counterexample> {
        const std::int64_t expected = h0_search(params, n - 1);
        const std::int64_t actual = h_formula(n);
        if (expected == actual)
            return std::nullopt;
        return Counterexample{n, detail::str(expected), detail::str(actual), "h(n) vs bisection on T_k"};
    });
    return CheckReport{"closed_form_window", params.m(), n_lo, n_hi, std::move(result.first), std::nullopt};
}

}  // namespace nestrec
