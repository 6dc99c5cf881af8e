#pragma once
// Three independent generators for a(1..N): the nested recurrence, the
// conditional-increment rule, and the closed form.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "nestrec/exact_arith.hpp"
#include "nestrec/parallel.hpp"

namespace nestrec {

enum class Engine { Nested, Increment, ClosedForm };
enum class TableKind { Canonical, ZeroIndexed, Variant };

inline const char* to_string(Engine e)
{
    switch (e) {
    case Engine::Nested: return "nested";
    case Engine::Increment: return "increment";
    case Engine::ClosedForm: return "closed";
    }
    return "?";
}

inline const char* to_string(TableKind k)
{
    switch (k) {
    case TableKind::Canonical: return "canonical";
    case TableKind::ZeroIndexed: return "zero-indexed";
    case TableKind::Variant: return "variant";
    }
    return "?";
}

/// Run lengths N_k = p*k + q of a k-appearance sequence.
struct FrequencyRule
{
    std::int64_t p = 1;
    std::int64_t q = 1;

    std::int64_t count(std::int64_t k) const { return p * k + q; }
    bool valid() const noexcept { return p >= 0 && q >= 1; }
    friend bool operator==(const FrequencyRule&, const FrequencyRule&) = default;
};

/// Provenance of a Variant table.
struct VariantInfo
{
    std::int64_t initial_value = 1;
    std::optional<FrequencyRule> rule;
};

/// An iterate a^(j)(n) left the range of indices a table can answer.
class IterateOutOfRange : public std::out_of_range
{
public:
    IterateOutOfRange(std::int64_t index, std::int64_t first, std::int64_t last)
        : std::out_of_range("iterate index " + std::to_string(index) + " outside table range [" +
                            std::to_string(first) + ", " + std::to_string(last) + "]"),
          index_(index), first_(first), last_(last)
    {}

    std::int64_t index() const noexcept { return index_; }
    std::int64_t first() const noexcept { return first_; }
    std::int64_t last() const noexcept { return last_; }

private:
    std::int64_t index_, first_, last_;
};

namespace detail {

template <class Int>
std::int64_t to_i64(const Int& v)
{
    if constexpr (std::is_integral_v<Int>)
        return static_cast<std::int64_t>(v);
    else
        return to_int64(Wide(v));
}

}  // namespace detail

/// Dense table of a(start_index .. start_index + size - 1) with provenance.
/// Immutable once built.
template <class Int>
class BasicSeqTable
{
public:
    using value_type = Int;

    BasicSeqTable(FamilyParams params, std::int64_t start_index, std::vector<Int> values, TableKind kind, Engine engine,
                  std::optional<VariantInfo> variant = std::nullopt)
        : params_(params), start_(start_index), values_(std::move(values)), kind_(kind), engine_(engine),
          variant_(std::move(variant))
    {
        if (values_.empty())
            throw std::invalid_argument("SeqTable must hold at least one value");
    }

    const FamilyParams& params() const noexcept { return params_; }
    std::int64_t m() const noexcept { return params_.m(); }
    std::int64_t start_index() const noexcept { return start_; }
    std::int64_t last_index() const noexcept { return start_ + static_cast<std::int64_t>(values_.size()) - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<Int>& values() const noexcept { return values_; }
    TableKind kind() const noexcept { return kind_; }
    Engine engine() const noexcept { return engine_; }
    const std::optional<VariantInfo>& variant() const noexcept { return variant_; }

    bool contains(std::int64_t n) const noexcept { return n >= start_ && n <= last_index(); }

    /// a(n); throws IterateOutOfRange outside the table.
    const Int& at(std::int64_t n) const
    {
        if (!contains(n))
            throw IterateOutOfRange(n, start_, last_index());
        return values_[static_cast<std::size_t>(n - start_)];
    }

    /// a(n) without a range check.
    const Int& operator[](std::int64_t n) const noexcept { return values_[static_cast<std::size_t>(n - start_)]; }

    /// Same values and indexing; provenance is ignored.
    bool same_values(const BasicSeqTable& other) const
    {
        return start_ == other.start_ && values_ == other.values_;
    }

private:
    FamilyParams params_;
    std::int64_t start_;
    std::vector<Int> values_;
    TableKind kind_;
    Engine engine_;
    std::optional<VariantInfo> variant_;
};

using SeqTable = BasicSeqTable<std::int64_t>;
using WideSeqTable = BasicSeqTable<Wide>;

/// a^(j)(n); j = 0 returns n. Throws IterateOutOfRange if n or any iterate leaves the table.
template <class Int>
std::int64_t iterate(const BasicSeqTable<Int>& table, std::int64_t j, std::int64_t n)
{
    if (j < 0)
        throw std::invalid_argument("iterate: j must be >= 0");
    if (!table.contains(n))
        throw IterateOutOfRange(n, table.start_index(), table.last_index());
    std::int64_t x = n;
    for (std::int64_t i = 0; i < j; ++i)
        x = detail::to_i64(table.at(x));
    return x;
}

namespace detail {

template <class Int>
void require_table_capacity(std::int64_t n_max)
{
    if (n_max < 1)
        throw std::invalid_argument("n_max must be >= 1");
    if constexpr (std::is_integral_v<Int>) {
        // a(n) <= n, so n + a(n) is the largest intermediate in the nested build.
        if (n_max > std::numeric_limits<Int>::max() / 2)
            throw std::length_error("n_max exceeds the machine-width table cap; use WideSeqTable");
    }
}

/// Where an iterate escaped during a nested build.
struct Escape
{
    enum class Direction { Low, High };
    Direction direction;
    std::int64_t n;      // the argument whose a(n+1) was being computed
    std::int64_t index;  // the offending iterate
};

/// Left-to-right build of a(start .. last) from a(start) = initial using
/// a(n+1) = n - a^(m)(n) + a^(m+1)(n). a^(m+1)(n) reuses the m-chain.
template <class Int>
std::variant<std::vector<Int>, Escape> nested_build(const FamilyParams& params, std::int64_t start, Int initial,
                                                    std::int64_t last)
{
    std::vector<Int> values;
    values.reserve(static_cast<std::size_t>(last - start + 1));
    values.push_back(std::move(initial));
    const std::int64_t m = params.m();

    for (std::int64_t n = start; n < last; ++n) {
        const std::int64_t prefix_end = start + static_cast<std::int64_t>(values.size()) - 1;
        std::int64_t x = n;
        std::optional<Escape> escaped;
        auto step = [&](std::int64_t idx) -> std::int64_t {
            if (idx < start) {
                escaped = Escape{Escape::Direction::Low, n, idx};
                return idx;
            }
            if (idx > prefix_end) {
                escaped = Escape{Escape::Direction::High, n, idx};
                return idx;
            }
            return to_i64(values[static_cast<std::size_t>(idx - start)]);
        };
        for (std::int64_t j = 0; j < m && !escaped; ++j)
            x = step(x);
        if (escaped)
            return *escaped;
        const std::int64_t x_next = step(x);
        if (escaped)
            return *escaped;
        values.push_back(Int(n) - Int(x) + Int(x_next));
    }
    return values;
}

}  // namespace detail

/// a(1) = 1; a(n+1) = a(n) + [n not in S'_m], tracking the next polygonal number with a cursor.
template <class Int = std::int64_t>
BasicSeqTable<Int> gen_increment(const FamilyParams& params, std::int64_t n_max)
{
    detail::require_table_capacity<Int>(n_max);
    std::vector<Int> values;
    values.reserve(static_cast<std::size_t>(n_max));
    values.push_back(Int(1));
    std::int64_t k = 1;
    Int next_boundary = t_orig(params, Int(k));
    for (std::int64_t n = 1; n < n_max; ++n) {
        Int step = 1;
        if (Int(n) == next_boundary) {
            step = 0;
            ++k;
            next_boundary = t_orig(params, Int(k));
        }
        values.push_back(values.back() + step);
    }
    return BasicSeqTable<Int>(params, 1, std::move(values), TableKind::Canonical, Engine::Increment);
}

/// Build from a(1) = 1 with the nested recurrence itself.
template <class Int = std::int64_t>
BasicSeqTable<Int> gen_nested(const FamilyParams& params, std::int64_t n_max)
{
    detail::require_table_capacity<Int>(n_max);
    auto built = detail::nested_build<Int>(params, 1, Int(1), n_max);
    if (auto* escape = std::get_if<detail::Escape>(&built))
        throw IterateOutOfRange(escape->index, 1, escape->n);
    return BasicSeqTable<Int>(params, 1, std::get<std::vector<Int>>(std::move(built)), TableKind::Canonical,
                              Engine::Nested);
}

/// values[i] = a_closed(i + 1); the index range is split across `jobs` workers.
template <class Int = std::int64_t>
BasicSeqTable<Int> gen_closed(const FamilyParams& params, std::int64_t n_max, unsigned jobs = 1)
{
    detail::require_table_capacity<Int>(n_max);
    std::vector<Int> values(static_cast<std::size_t>(n_max));
    for_each_chunk(1, n_max, jobs, [&](std::int64_t lo, std::int64_t hi, std::size_t) {
        for (std::int64_t n = lo; n <= hi; ++n)
            values[static_cast<std::size_t>(n - 1)] = a_closed(params, Int(n));
    });
    return BasicSeqTable<Int>(params, 1, std::move(values), TableKind::Canonical, Engine::ClosedForm);
}

/// Dispatch on the engine enum.
template <class Int = std::int64_t>
BasicSeqTable<Int> generate(Engine engine, const FamilyParams& params, std::int64_t n_max, unsigned jobs = 1)
{
    switch (engine) {
    case Engine::Nested: return gen_nested<Int>(params, n_max);
    case Engine::Increment: return gen_increment<Int>(params, n_max);
    case Engine::ClosedForm: return gen_closed<Int>(params, n_max, jobs);
    }
    throw std::invalid_argument("unknown engine");
}

}  // namespace nestrec
