#pragma once
// OEIS b-files and the correspondences between this family and OEIS entries.
//
// b-file syntax: blank lines, '#' comment lines, and "index value" lines with
// arbitrary whitespace between two integers. Indices must be consecutive.

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nestrec/check_report.hpp"
#include "nestrec/engines.hpp"
#include "nestrec/exact_arith.hpp"
#include "nestrec/sums.hpp"

namespace nestrec::oeis {

class BFileError : public std::runtime_error
{
public:
    BFileError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MalformedLine : public BFileError
{
public:
    MalformedLine(std::size_t line, std::string content)
        : BFileError("malformed b-file line " + std::to_string(line) + ": '" + content + "'", line),
          content_(std::move(content))
    {}
    const std::string& content() const noexcept { return content_; }

private:
    std::string content_;
};

class NonContiguousIndex : public BFileError
{
public:
    NonContiguousIndex(std::size_t line, const Wide& expected, const Wide& found)
        : BFileError("non-contiguous index at line " + std::to_string(line) + ": expected " + expected.str() +
                         ", found " + found.str(),
                     line)
    {}
};

class EmptyOverlap : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// "A" followed by exactly six digits.
inline bool is_valid_id(std::string_view id)
{
    if (id.size() != 7 || id[0] != 'A')
        return false;
    for (std::size_t i = 1; i < id.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(id[i])))
            return false;
    return true;
}

inline void require_valid_id(std::string_view id)
{
    if (!is_valid_id(id))
        throw std::invalid_argument("invalid OEIS A-number '" + std::string(id) + "' (expected A + 6 digits)");
}

struct BEntry
{
    Wide index;
    Wide value;
    friend bool operator==(const BEntry&, const BEntry&) = default;
};

struct BFile
{
    std::string id;
    std::vector<BEntry> entries;

    bool empty() const noexcept { return entries.empty(); }
    const Wide& first_index() const { return entries.front().index; }
    const Wide& last_index() const { return entries.back().index; }

    /// Value at an index, if the file covers it.
    std::optional<Wide> value_at(const Wide& index) const
    {
        if (entries.empty() || index < first_index() || index > last_index())
            return std::nullopt;
        return entries[static_cast<std::size_t>(index - first_index())].value;
    }
};

namespace detail {

inline bool parse_integer(std::string_view tok, Wide& out)
{
    std::size_t i = 0;
    if (!tok.empty() && (tok[0] == '-' || tok[0] == '+'))
        i = 1;
    if (i == tok.size())
        return false;
    for (std::size_t j = i; j < tok.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(tok[j])))
            return false;
    out = Wide(std::string(tok[0] == '+' ? tok.substr(1) : tok));
    return true;
}

inline std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

}  // namespace detail

/// Parse b-file text. Throws MalformedLine or NonContiguousIndex (line numbers are 1-based).
inline BFile parse_bfile(std::string id, std::string_view text)
{
    require_valid_id(id);
    BFile out{std::move(id), {}};
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        const auto tokens = detail::split_ws(line);
        if (tokens.empty() || tokens[0].front() == '#')
            continue;
        BEntry entry;
        if (tokens.size() != 2 || !detail::parse_integer(tokens[0], entry.index) ||
            !detail::parse_integer(tokens[1], entry.value)) {
            std::string content(line);
            if (!content.empty() && content.back() == '\r')
                content.pop_back();
            throw MalformedLine(line_no, std::move(content));
        }
        if (!out.entries.empty() && entry.index != out.entries.back().index + 1)
            throw NonContiguousIndex(line_no, out.entries.back().index + 1, entry.index);
        out.entries.push_back(std::move(entry));
    }
    return out;
}

/// "index value\n" per entry; comments and spacing are not preserved.
inline std::string serialize_bfile(const BFile& file)
{
    std::string out;
    for (const auto& e : file.entries) {
        out += e.index.str();
        out += ' ';
        out += e.value.str();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

enum class Quantity { A, H, PartialSum };

inline const char* to_string(Quantity q)
{
    switch (q) {
    case Quantity::A: return "a";
    case Quantity::H: return "h";
    case Quantity::PartialSum: return "sums";
    }
    return "?";
}

inline std::optional<Quantity> parse_quantity(std::string_view s)
{
    if (s == "a")
        return Quantity::A;
    if (s == "h")
        return Quantity::H;
    if (s == "sums")
        return Quantity::PartialSum;
    return std::nullopt;
}

/// OEIS(n + index_shift) = quantity(n) + value_shift.
struct Transform
{
    std::int64_t index_shift = 0;
    std::int64_t value_shift = 0;
    friend bool operator==(const Transform&, const Transform&) = default;
};

struct Correspondence
{
    std::string oeis_id;
    std::int64_t m = 1;
    Quantity quantity = Quantity::A;
    Transform transform;
    std::string description;
};

/// The eight registered rows, each encoded literally from its defining statement.
inline const std::vector<Correspondence>& registry()
{
    static const std::vector<Correspondence> rows = {
        {"A122797", 1, Quantity::A, {0, 0}, "a(n), m=1: increment suppressed at triangular numbers"},
        {"A003056", 1, Quantity::H, {-1, 0}, "h(n) = A003056(n-1), m=1"},
        {"A028391", 2, Quantity::A, {-1, -1}, "a(n) - 1 = A028391(n-1), m=2: non-squares <= n-1"},
        {"A000196", 2, Quantity::H, {-1, 0}, "h(n) = A000196(n-1), m=2: floor(sqrt(n-1))"},
        {"A180446", 3, Quantity::A, {-1, -1}, "a(n) - 1 = A180446(n-1), m=3: non-pentagonal numbers <= n-1"},
        {"A180447", 3, Quantity::H, {-1, 0}, "h(n) = A180447(n-1), m=3"},
        {"A351846", 4, Quantity::H, {-1, 0}, "h(n) = A351846(n-1), m=4: hexagonal numbers <= n-1"},
        {"A196126", 2, Quantity::PartialSum, {0, 0}, "A_2(n) = A196126(n): lattice pairs y <= x <= y^2, x <= n"},
    };
    return rows;
}

inline std::optional<Correspondence> find_correspondence(std::string_view id)
{
    for (const auto& row : registry())
        if (row.oeis_id == id)
            return row;
    return std::nullopt;
}

/// For n in 1..n_max, wherever n + index_shift is in the b-file, require
/// OEIS(n + index_shift) == quantity_m(n) + value_shift. The number of
/// compared indices is reported as case_counts["overlap"].
inline CheckReport check_correspondence(const Correspondence& corr, const BFile& bfile, std::int64_t n_max)
{
    if (bfile.id != corr.oeis_id)
        throw std::invalid_argument("b-file " + bfile.id + " does not match correspondence " + corr.oeis_id);
    if (n_max < 1)
        throw std::invalid_argument("check_correspondence: n_max must be >= 1");
    const FamilyParams params(corr.m);

    std::optional<SumTable> sums;
    if (corr.quantity == Quantity::PartialSum)
        sums = partial_sums(gen_closed(params, n_max));

    CheckReport report{"oeis:" + corr.oeis_id, corr.m, 1, n_max, {}, CaseCounts{{"overlap", 0}}};
    std::int64_t lo = 0, hi = 0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const auto oeis_value = bfile.value_at(Wide(n + corr.transform.index_shift));
        if (!oeis_value)
            continue;
        Wide ours;
        switch (corr.quantity) {
        case Quantity::A: ours = a_closed(params, n); break;
        case Quantity::H: ours = h_closed(params, n); break;
        case Quantity::PartialSum: ours = sums->at(n); break;
        }
        ours += corr.transform.value_shift;
        if (ours != *oeis_value) {
            report.counterexample =
                Counterexample{n, oeis_value->str(), ours.str(),
                               corr.oeis_id + "(" + std::to_string(n + corr.transform.index_shift) + ") vs " +
                                   to_string(corr.quantity) + "(n)" +
                                   (corr.transform.value_shift ? " + " + std::to_string(corr.transform.value_shift) : "")};
            break;
        }
        if (lo == 0)
            lo = n;
        hi = n;
        ++(*report.case_counts)["overlap"];
    }
    if (report.passed() && report.count("overlap") == 0)
        throw EmptyOverlap("no index of " + corr.oeis_id + " aligns with n in [1, " + std::to_string(n_max) + "]");
    if (report.passed()) {
        report.n_lo = lo;
        report.n_hi = hi;
    }
    return report;
}

/// Largest n whose shifted index is still inside the b-file.
inline std::int64_t full_overlap_n_max(const Correspondence& corr, const BFile& bfile)
{
    if (bfile.empty())
        throw EmptyOverlap("empty b-file " + bfile.id);
    return nestrec::detail::to_int64(bfile.last_index()) - corr.transform.index_shift;
}

}  // namespace nestrec::oeis
