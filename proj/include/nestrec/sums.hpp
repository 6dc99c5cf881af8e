#pragma once
// Partial sums A_m(n) = a(1) + ... + a(n), and for m = 2 the lattice-point
// count |{(x, y) in Z+ x Z+ : y <= x <= y^2, x <= n}|.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nestrec/check_report.hpp"
#include "nestrec/engines.hpp"
#include "nestrec/exact_arith.hpp"

namespace nestrec {

struct SumTable
{
    std::int64_t m = 0;
    std::vector<Wide> sums;  // sums[i] = A_m(i + 1)

    const Wide& at(std::int64_t n) const
    {
        if (n < 1 || n > static_cast<std::int64_t>(sums.size()))
            throw std::out_of_range("SumTable::at: n outside [1, size]");
        return sums[static_cast<std::size_t>(n - 1)];
    }
};

inline SumTable partial_sums(const SeqTable& table)
{
    if (table.kind() != TableKind::Canonical || table.start_index() != 1)
        throw std::invalid_argument("partial_sums requires a canonical table starting at a(1)");
    SumTable out{table.m(), {}};
    out.sums.reserve(table.size());
    Wide acc = 0;
    for (const auto v : table.values()) {
        acc += v;
        out.sums.push_back(acc);
    }
    return out;
}

/// Number of y with y <= x <= y^2, i.e. x - ceil(sqrt(x)) + 1.
inline std::int64_t lattice_column(std::int64_t x)
{
    if (x < 1)
        throw std::domain_error("lattice_column: x must be >= 1");
    return x - ceil_sqrt(x) + 1;
}

/// lattice_counts(n_max)[i] = count for n = i + 1, built in one pass over x.
inline std::vector<Wide> lattice_counts(std::int64_t n_max)
{
    if (n_max < 1)
        throw std::invalid_argument("lattice_counts: n_max must be >= 1");
    std::vector<Wide> out;
    out.reserve(static_cast<std::size_t>(n_max));
    Wide acc = 0;
    for (std::int64_t x = 1; x <= n_max; ++x) {
        acc += lattice_column(x);
        out.push_back(acc);
    }
    return out;
}

inline Wide lattice_count(std::int64_t n)
{
    if (n < 1)
        throw std::invalid_argument("lattice_count: n must be >= 1");
    return lattice_counts(n).back();
}

/// A_2(n) equals the lattice count for every n <= n_max, and the count's first
/// difference at n equals n - floor(sqrt(n - 1)).
inline CheckReport check_sums_m2(std::int64_t n_max)
{
    if (n_max < 1)
        throw std::invalid_argument("check_sums_m2: n_max must be >= 1");
    const FamilyParams params(2);
    const SumTable sums = partial_sums(gen_closed(params, n_max));
    const std::vector<Wide> lattice = lattice_counts(n_max);

    CheckReport report{"sums_m2", 2, 1, n_max, {}, CaseCounts{{"checked", 0}}};
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const Wide& s = sums.at(n);
        const Wide& l = lattice[static_cast<std::size_t>(n - 1)];
        if (s != l) {
            report.counterexample = Counterexample{n, l.str(), s.str(), "A_2(n) vs lattice count"};
            return report;
        }
        const Wide diff = n == 1 ? l : l - lattice[static_cast<std::size_t>(n - 2)];
        const std::int64_t expected = n - isqrt(n - 1);
        if (diff != expected) {
            report.counterexample = Counterexample{n, std::to_string(expected), diff.str(),
                                                   "lattice first difference vs n - isqrt(n-1)"};
            return report;
        }
        ++(*report.case_counts)["checked"];
    }
    return report;
}

}  // namespace nestrec
