#pragma once
// The zero-indexed solution a(0) = 0 and observational runs of the nested
// recurrence under other initial values or other run-length rules.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "nestrec/engines.hpp"
#include "nestrec/exact_arith.hpp"

namespace nestrec {

struct VariantSpec
{
    std::int64_t m = 1;
    std::int64_t initial_value = 1;
    std::int64_t start_index = 1;
    std::optional<FrequencyRule> frequency_rule;  // absent means N_k = mk + 1

    FrequencyRule rule() const { return frequency_rule.value_or(FrequencyRule{m, 1}); }
    bool default_rule() const { return rule() == FrequencyRule{m, 1}; }

    void validate() const
    {
        if (m < 1)
            throw std::invalid_argument("variant m must be >= 1");
        if (start_index != 0 && start_index != 1)
            throw std::invalid_argument("variant start_index must be 0 or 1");
        if (!rule().valid())
            throw std::invalid_argument("frequency rule needs p >= 0 and q >= 1");
    }
};

/// An iterate left [start_index, built prefix end] while computing a(n+1).
struct Escaped
{
    enum class Direction { Low, High };
    Direction direction;
    std::int64_t n;
    std::int64_t index;

    friend bool operator==(const Escaped&, const Escaped&) = default;
};

using VariantOutcome = std::variant<SeqTable, Escaped>;

struct FrequencyProfile
{
    std::vector<std::pair<std::int64_t, std::int64_t>> counts;  // (value of n - a(n), multiplicity)
    bool last_incomplete = false;
};

struct Classification
{
    bool slow_growing = false;
    FrequencyProfile profile;
    std::optional<FrequencyRule> matches_affine_rule;
    bool matches_spec_rule = false;  // matches_affine_rule equals the spec's N_k rule
};

/// a(0) = 0 and a(n+1) = n - a^(m)(n) + a^(m+1)(n) for n >= 0, so index 0 is
/// a legal iterate (the n = 0 step gives a(1) = 0). Checked pointwise against
/// n - h0_closed(m, n) before returning.
inline SeqTable gen_zero_indexed(const FamilyParams& params, std::int64_t n_max)
{
    detail::require_table_capacity<std::int64_t>(n_max);
    auto built = detail::nested_build<std::int64_t>(params, 0, 0, n_max);
    if (auto* escape = std::get_if<detail::Escape>(&built))
        throw IterateOutOfRange(escape->index, 0, escape->n);
    auto values = std::get<std::vector<std::int64_t>>(std::move(built));
    for (std::int64_t n = 0; n <= n_max; ++n)
        if (values[static_cast<std::size_t>(n)] != n - h0_closed(params, n))
            throw std::logic_error("zero-indexed build disagrees with n - h0(n) at n = " + std::to_string(n));
    return SeqTable(params, 0, std::move(values), TableKind::ZeroIndexed, Engine::Nested);
}

/// a(n) = n - h0_closed(m, n) for n = 0..n_max.
inline SeqTable gen_zero_indexed_closed(const FamilyParams& params, std::int64_t n_max)
{
    detail::require_table_capacity<std::int64_t>(n_max);
    std::vector<std::int64_t> values(static_cast<std::size_t>(n_max) + 1);
    for (std::int64_t n = 0; n <= n_max; ++n)
        values[static_cast<std::size_t>(n)] = n - h0_closed(params, n);
    return SeqTable(params, 0, std::move(values), TableKind::ZeroIndexed, Engine::ClosedForm);
}

namespace detail {

// a(n) = a(start) + (n - start) - h(n), where h starts at 0 and the value k
// repeats p*k + q times.
inline std::vector<std::int64_t> k_appearance_build(const VariantSpec& spec, std::int64_t last)
{
    const FrequencyRule rule = spec.rule();
    std::vector<std::int64_t> values;
    values.reserve(static_cast<std::size_t>(last - spec.start_index + 1));
    std::int64_t level = 0;
    std::int64_t left_in_run = rule.count(0);
    for (std::int64_t n = spec.start_index; n <= last; ++n) {
        if (left_in_run == 0) {
            ++level;
            left_in_run = rule.count(level);
        }
        values.push_back(spec.initial_value + (n - spec.start_index) - level);
        --left_in_run;
    }
    return values;
}

}  // namespace detail

/// Build a(start_index .. n_max) for a variant. With the default rule this is
/// the nested recurrence from spec.initial_value, and an iterate escaping the
/// built prefix is returned as a classification. With any other rule the
/// table is the k-appearance candidate n - h_{p,q}(n) shifted to the initial
/// value; use recurrence_residual to see whether it obeys the recurrence.
inline VariantOutcome gen_variant(const VariantSpec& spec, std::int64_t n_max)
{
    spec.validate();
    detail::require_table_capacity<std::int64_t>(n_max);
    const FamilyParams params(spec.m);
    const VariantInfo info{spec.initial_value, spec.frequency_rule};

    if (!spec.default_rule())
        return SeqTable(params, spec.start_index, detail::k_appearance_build(spec, n_max), TableKind::Variant,
                        Engine::Increment, info);

    auto built = detail::nested_build<std::int64_t>(params, spec.start_index, spec.initial_value, n_max);
    if (auto* escape = std::get_if<detail::Escape>(&built))
        return Escaped{escape->direction == detail::Escape::Direction::Low ? Escaped::Direction::Low
                                                                          : Escaped::Direction::High,
                       escape->n, escape->index};
    return SeqTable(params, spec.start_index, std::get<std::vector<std::int64_t>>(std::move(built)),
                    TableKind::Variant, Engine::Nested, info);
}

struct RecurrenceViolation
{
    std::int64_t n;
    std::string reason;
};

/// First n in the table where a(n+1) != n - a^(m)(n) + a^(m+1)(n), or where an
/// iterate leaves the table; nullopt if the whole table obeys the recurrence.
inline std::optional<RecurrenceViolation> recurrence_residual(const SeqTable& table, std::int64_t m)
{
    for (std::int64_t n = table.start_index(); n < table.last_index(); ++n) {
        std::int64_t x = n;
        for (std::int64_t j = 0; j <= m; ++j) {
            if (!table.contains(x))
                return RecurrenceViolation{n, "iterate " + std::to_string(x) + " outside the table"};
            const std::int64_t next = table[x];
            if (j == m) {
                const std::int64_t rhs = n - x + next;
                if (rhs != table[n + 1])
                    return RecurrenceViolation{n, "a(n+1)=" + std::to_string(table[n + 1]) +
                                                      " but recurrence gives " + std::to_string(rhs)};
            }
            x = next;
        }
    }
    return std::nullopt;
}

/// Growth and run-length structure of d(n) = n - a(n). The last distinct value
/// is treated as incomplete (the table end may cut it short), so an affine
/// rule is only reported when at least two complete runs fit it.
inline Classification classify(const SeqTable& table, const VariantSpec& spec)
{
    Classification out;
    out.slow_growing = true;
    for (std::int64_t n = table.start_index(); n < table.last_index(); ++n) {
        const std::int64_t diff = table[n + 1] - table[n];
        if (diff != 0 && diff != 1) {
            out.slow_growing = false;
            break;
        }
    }

    auto& counts = out.profile.counts;
    std::map<std::int64_t, std::size_t> slot;
    for (std::int64_t n = table.start_index(); n <= table.last_index(); ++n) {
        const std::int64_t d = n - table[n];
        auto [it, inserted] = slot.try_emplace(d, counts.size());
        if (inserted)
            counts.emplace_back(d, 1);
        else
            ++counts[it->second].second;
    }
    out.profile.last_incomplete = !counts.empty();

    if (!out.slow_growing || counts.size() < 3)
        return out;
    const std::size_t complete = counts.size() - 1;
    const std::int64_t q = counts[0].second;
    const std::int64_t p = counts[1].second - q;
    if (p < 0 || q < 1)
        return out;
    for (std::size_t k = 0; k < complete; ++k)
        if (counts[k].second != p * static_cast<std::int64_t>(k) + q)
            return out;
    out.matches_affine_rule = FrequencyRule{p, q};
    out.matches_spec_rule = *out.matches_affine_rule == spec.rule();
    return out;
}

/// Structured record for one explorer run.
inline nlohmann::ordered_json explore_record(const VariantSpec& spec, std::int64_t n_max, const VariantOutcome& outcome,
                                             std::size_t profile_limit = 32)
{
    nlohmann::ordered_json j;
    j["check_name"] = "explore";
    j["m"] = spec.m;
    j["range"] = {spec.start_index, n_max};
    j["initial_value"] = spec.initial_value;
    j["start_index"] = spec.start_index;
    j["rule"] = {spec.rule().p, spec.rule().q};
    if (spec.start_index == 0)
        j["note"] = "n = 0 is a legal argument of the recurrence; a(1) = 0 - a^(m)(0) + a^(m+1)(0)";

    if (const auto* esc = std::get_if<Escaped>(&outcome)) {
        j["outcome"] = esc->direction == Escaped::Direction::Low ? "escaped_low" : "escaped_high";
        j["escape"] = {{"n", esc->n}, {"index", esc->index}};
        return j;
    }
    const auto& table = std::get<SeqTable>(outcome);
    const Classification c = classify(table, spec);
    j["outcome"] = "table";
    j["engine"] = to_string(table.engine());
    j["slow_growing"] = c.slow_growing;
    if (c.matches_affine_rule)
        j["matches_affine_rule"] = {c.matches_affine_rule->p, c.matches_affine_rule->q};
    else
        j["matches_affine_rule"] = nullptr;
    j["matches_spec_rule"] = c.matches_spec_rule;
    const auto violation = recurrence_residual(table, spec.m);
    j["satisfies_recurrence"] = !violation.has_value();
    if (violation)
        j["first_violation"] = {{"n", violation->n}, {"reason", violation->reason}};
    j["distinct_values"] = c.profile.counts.size();
    auto profile = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < c.profile.counts.size() && i < profile_limit; ++i)
        profile.push_back({c.profile.counts[i].first, c.profile.counts[i].second});
    j["profile_head"] = std::move(profile);
    j["last_incomplete"] = c.profile.last_incomplete;
    return j;
}

}  // namespace nestrec
