#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace nestrec {

struct Counterexample
{
    std::int64_t n = 0;
    std::string expected;
    std::string actual;
    std::string context;

    friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

using CaseCounts = std::map<std::string, std::int64_t>;

/// Result of one verification sweep. A report passes iff it carries no counterexample.
struct CheckReport
{
    std::string check_name;
    std::int64_t m = 0;
    std::int64_t n_lo = 0;
    std::int64_t n_hi = 0;
    std::optional<Counterexample> counterexample;
    std::optional<CaseCounts> case_counts;

    bool passed() const noexcept { return !counterexample.has_value(); }

    std::int64_t count(const std::string& key) const
    {
        if (!case_counts)
            return 0;
        auto it = case_counts->find(key);
        return it == case_counts->end() ? 0 : it->second;
    }
};

/// One structured record per line.
inline std::string to_record(const CheckReport& r)
{
    nlohmann::ordered_json j;
    j["check_name"] = r.check_name;
    j["m"] = r.m;
    j["range"] = {r.n_lo, r.n_hi};
    j["passed"] = r.passed();
    if (r.counterexample) {
        const auto& c = *r.counterexample;
        j["counterexample"] = {{"n", c.n}, {"expected", c.expected}, {"actual", c.actual}, {"context", c.context}};
    } else {
        j["counterexample"] = nullptr;
    }
    if (r.case_counts)
        j["case_counts"] = *r.case_counts;
    else
        j["case_counts"] = nullptr;
    return j.dump();
}

/// Human-readable single line, e.g. "PASS key_identity m=2 n=[1,99] boundary=9 interior=90".
inline std::string to_plain(const CheckReport& r)
{
    std::ostringstream os;
    os << (r.passed() ? "PASS " : "FAIL ") << r.check_name << " m=" << r.m << " n=[" << r.n_lo << "," << r.n_hi << "]";
    if (r.case_counts)
        for (const auto& [key, value] : *r.case_counts)
            os << ' ' << key << '=' << value;
    if (r.counterexample) {
        const auto& c = *r.counterexample;
        os << " first_counterexample: n=" << c.n << " expected=" << c.expected << " actual=" << c.actual;
        if (!c.context.empty())
            os << " (" << c.context << ')';
    }
    return os.str();
}

}  // namespace nestrec
