#include "cli.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nestrec/nestrec.hpp"
#include "nestrec/oeis_fetch.hpp"

namespace nestrec::cli {
namespace {

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

enum class Format { Plain, Csv, Json };

Format parse_format(const std::string& s)
{
    if (s == "plain")
        return Format::Plain;
    if (s == "csv")
        return Format::Csv;
    if (s == "json")
        return Format::Json;
    throw UsageError("unknown format '" + s + "' (plain, csv, json)");
}

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& s, const char* flag)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw UsageError(std::string(flag) + " expects two comma-separated integers, got '" + s + "'");
    try {
        std::size_t used_a = 0, used_b = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const std::int64_t first = std::stoll(a, &used_a);
        const std::int64_t second = std::stoll(b, &used_b);
        if (used_a != a.size() || used_b != b.size())
            throw std::invalid_argument(s);
        return {first, second};
    } catch (const std::logic_error&) {
        throw UsageError(std::string(flag) + " expects two comma-separated integers, got '" + s + "'");
    }
}

void require_at_least(std::int64_t v, std::int64_t lo, const char* flag)
{
    if (v < lo)
        throw UsageError(std::string(flag) + " must be >= " + std::to_string(lo) + ", got " + std::to_string(v));
}

/// Writes (index, value) rows in the requested format to stdout or a file.
class RowWriter
{
public:
    RowWriter(std::ostream& out, const std::string& path, Format format, std::string value_name)
        : format_(format), value_name_(std::move(value_name))
    {
        if (path.empty() || path == "-") {
            os_ = &out;
        } else {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_)
                throw IoError("cannot open output file " + path);
            os_ = &file_;
        }
        if (format_ == Format::Csv)
            *os_ << "n," << value_name_ << '\n';
    }

    void row(std::int64_t n, const std::string& value)
    {
        switch (format_) {
        case Format::Plain: *os_ << n << ' ' << value << '\n'; break;
        case Format::Csv: *os_ << n << ',' << value << '\n'; break;
        case Format::Json: *os_ << "{\"n\":" << n << ",\"" << value_name_ << "\":" << value << "}\n"; break;
        }
    }

    void finish()
    {
        os_->flush();
        if (!*os_)
            throw IoError("write failed");
    }

private:
    Format format_;
    std::string value_name_;
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

Engine parse_engine(const std::string& s)
{
    if (s == "nested")
        return Engine::Nested;
    if (s == "increment")
        return Engine::Increment;
    if (s == "closed")
        return Engine::ClosedForm;
    throw UsageError("unknown engine '" + s + "' (nested, increment, closed)");
}

std::string read_whole_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_report(std::ostream& os, const CheckReport& r, Format format)
{
    os << (format == Format::Json ? to_record(r) : to_plain(r)) << '\n';
}

// ---------------------------------------------------------------------------

struct SeqArgs
{
    std::int64_t m = 0, n = 0;
    std::string engine = "closed", format = "plain", out;
    bool zero_indexed = false;
    unsigned jobs = 0;
};

int cmd_seq(const SeqArgs& a, std::ostream& out, std::ostream& err)
{
    require_at_least(a.m, 1, "--m");
    require_at_least(a.n, 1, "--n");
    const FamilyParams params(a.m);
    const Engine engine = parse_engine(a.engine);
    RowWriter writer(out, a.out, parse_format(a.format), "a");

    if (a.zero_indexed) {
        SeqTable table = [&] {
            switch (engine) {
            case Engine::Nested: return gen_zero_indexed(params, a.n);
            case Engine::ClosedForm: return gen_zero_indexed_closed(params, a.n);
            case Engine::Increment: break;
            }
            // a(0) = 0, a(n+1) = a(n) + [n+1 not in S'_m]
            std::vector<std::int64_t> v{0};
            for (std::int64_t n = 0; n < a.n; ++n)
                v.push_back(v.back() + (in_s_prime(params, n + 1) ? 0 : 1));
            return SeqTable(params, 0, std::move(v), TableKind::ZeroIndexed, Engine::Increment);
        }();
        for (std::int64_t n = 0; n <= a.n; ++n)
            writer.row(n, std::to_string(table[n]));
    } else {
        if (engine != Engine::ClosedForm && a.jobs != 1)
            err << "note: --jobs ignored, the " << to_string(engine) << " engine builds sequentially\n";
        const SeqTable table = generate(engine, params, a.n, a.jobs);
        for (std::int64_t n = 1; n <= a.n; ++n)
            writer.row(n, std::to_string(table[n]));
    }
    writer.finish();
    return kOk;
}

struct HArgs
{
    std::int64_t m = 0, n = 0;
    std::string format = "plain", out;
};

int cmd_h(const HArgs& a, std::ostream& out)
{
    require_at_least(a.m, 1, "--m");
    require_at_least(a.n, 1, "--n");
    const FamilyParams params(a.m);
    RowWriter writer(out, a.out, parse_format(a.format), "h");
    for (std::int64_t n = 1; n <= a.n; ++n)
        writer.row(n, std::to_string(h_closed(params, n)));
    writer.finish();
    return kOk;
}

struct VerifyArgs
{
    std::int64_t m = 0, max_n = 0;
    std::string checks = "growth,identity,p1,p2,cross,freq", format = "plain", h_source = "closed";
    unsigned jobs = 1;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err)
{
    require_at_least(a.m, 1, "--m");
    require_at_least(a.max_n, 1, "--max-n");
    const Format format = parse_format(a.format);
    if (format == Format::Csv)
        throw UsageError("verify supports --format plain or json");
    HSource source;
    if (a.h_source == "closed")
        source = HSource::Closed;
    else if (a.h_source == "table")
        source = HSource::Table;
    else
        throw UsageError("--h-source must be closed or table");

    std::vector<std::string> checks;
    {
        std::stringstream ss(a.checks);
        for (std::string item; std::getline(ss, item, ',');)
            if (!item.empty())
                checks.push_back(item);
    }
    static const std::vector<std::string> known = {"growth", "identity", "p1", "p2", "cross", "freq"};
    for (const auto& c : checks)
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw UsageError("unknown check '" + c + "'");
    if (checks.empty())
        throw UsageError("--checks is empty");

    const FamilyParams params(a.m);
    if (a.jobs != 1)
        err << "note: --jobs applies to the sweeps; the nested table itself is built sequentially\n";
    const SeqTable table = gen_nested(params, a.max_n);

    bool all_passed = true;
    for (const auto& c : checks) {
        CheckReport r;
        if (c == "growth")
            r = check_slow_growth(table);
        else if (c == "identity")
            r = check_key_identity(params, table, source, a.jobs);
        else if (c == "p1")
            r = check_boundary_p1_all(params, table, source, a.jobs);
        else if (c == "p2")
            r = check_boundary_p2_all(params, table, source, a.jobs);
        else if (c == "cross")
            r = cross_check(params, a.max_n, a.jobs);
        else
            r = check_frequency(params, table, source);
        all_passed = all_passed && r.passed();
        print_report(out, r, format);
    }
    return all_passed ? kOk : kCheckFailed;
}

struct SumsArgs
{
    std::int64_t m = 0, n = 0;
    std::string oracle, format = "plain", out;
};

int cmd_sums(const SumsArgs& a, std::ostream& out, std::ostream& err)
{
    require_at_least(a.m, 1, "--m");
    require_at_least(a.n, 1, "--n");
    if (!a.oracle.empty() && a.oracle != "lattice")
        throw UsageError("unknown oracle '" + a.oracle + "'");
    if (!a.oracle.empty() && a.m != 2)
        throw UsageError("--oracle lattice is only defined for --m 2");

    const FamilyParams params(a.m);
    const SumTable sums = partial_sums(gen_closed(params, a.n));
    RowWriter writer(out, a.out, parse_format(a.format), "sum");
    for (std::int64_t n = 1; n <= a.n; ++n)
        writer.row(n, sums.at(n).str());
    writer.finish();

    if (a.oracle.empty())
        return kOk;
    const CheckReport r = check_sums_m2(a.n);
    err << to_plain(r) << '\n';
    return r.passed() ? kOk : kCheckFailed;
}

struct OeisArgs
{
    std::string id, quantity, bfile, cache, shift, format = "plain", out;
    std::int64_t m = 0;
    std::int64_t n_max = 0;
    bool fetch = false;
};

oeis::FetchOptions fetch_options(const OeisArgs& a, bool allow_network)
{
    oeis::FetchOptions opts;
    if (!a.cache.empty())
        opts.cache_dir = a.cache;
    opts.allow_network = allow_network;
    return opts;
}

int cmd_oeis_check(const OeisArgs& a, std::ostream& out)
{
    if (!oeis::is_valid_id(a.id))
        throw UsageError("invalid OEIS id '" + a.id + "' (expected A + 6 digits)");
    require_at_least(a.m, 1, "--m");
    const auto quantity = oeis::parse_quantity(a.quantity);
    if (!quantity)
        throw UsageError("--quantity must be a, h or sums");
    if (!a.bfile.empty() && a.fetch)
        throw UsageError("--bfile and --fetch are mutually exclusive");
    const Format format = parse_format(a.format);

    oeis::Correspondence corr;
    if (!a.shift.empty()) {
        const auto [di, dv] = parse_pair(a.shift, "--shift");
        corr = oeis::Correspondence{a.id, a.m, *quantity, {di, dv}, "user-supplied transform"};
    } else if (auto row = oeis::find_correspondence(a.id)) {
        corr = *row;
        corr.m = a.m;
        corr.quantity = *quantity;
    } else {
        throw UsageError(a.id + " is not registered; pass --shift index_shift,value_shift");
    }

    std::string bytes;
    if (!a.bfile.empty())
        bytes = read_whole_file(a.bfile);
    else
        bytes = oeis::fetch_bfile(a.id, fetch_options(a, a.fetch)).bytes;

    oeis::BFile bfile;
    try {
        bfile = oeis::parse_bfile(a.id, bytes);
    } catch (const oeis::BFileError& e) {
        throw IoError(e.what());
    }
    const std::int64_t n_max = a.n_max > 0 ? a.n_max : oeis::full_overlap_n_max(corr, bfile);
    if (n_max < 1)
        throw IoError("b-file for " + a.id + " does not reach n >= 1 under the transform");
    const CheckReport r = oeis::check_correspondence(corr, bfile, n_max);
    print_report(out, r, format);
    return r.passed() ? kOk : kCheckFailed;
}

int cmd_oeis_fetch(const OeisArgs& a, std::ostream& out)
{
    if (!oeis::is_valid_id(a.id))
        throw UsageError("invalid OEIS id '" + a.id + "' (expected A + 6 digits)");
    const auto result = oeis::fetch_bfile(a.id, fetch_options(a, true));
    if (a.out.empty() || a.out == "-") {
        out << result.bytes;
    } else {
        std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
        f << result.bytes;
        if (!f)
            throw IoError("cannot write " + a.out);
    }
    return kOk;
}

struct ExploreArgs
{
    std::int64_t m = 0, n = 0, start_index = 1;
    std::optional<std::int64_t> a1;
    std::string rule, format = "json";
};

int cmd_explore(const ExploreArgs& a, std::ostream& out)
{
    require_at_least(a.m, 1, "--m");
    require_at_least(a.n, 1, "--n");
    if (a.start_index != 0 && a.start_index != 1)
        throw UsageError("--start-index must be 0 or 1");
    const Format format = parse_format(a.format);
    if (format == Format::Csv)
        throw UsageError("explore supports --format plain or json");

    VariantSpec spec;
    spec.m = a.m;
    spec.start_index = a.start_index;
    spec.initial_value = a.a1.value_or(a.start_index == 0 ? 0 : 1);
    if (!a.rule.empty()) {
        const auto [p, q] = parse_pair(a.rule, "--rule");
        spec.frequency_rule = FrequencyRule{p, q};
        if (!spec.frequency_rule->valid())
            throw UsageError("--rule needs p >= 0 and q >= 1");
    }
    if (a.n < spec.start_index)
        throw UsageError("--n must be >= --start-index");

    const auto outcome = gen_variant(spec, a.n);
    const auto record = explore_record(spec, a.n, outcome);
    if (format == Format::Json) {
        out << record.dump() << '\n';
    } else {
        for (const auto& [key, value] : record.items())
            out << key << ": " << value.dump() << '\n';
    }
    return kOk;
}

struct BenchArgs
{
    std::int64_t m = 0, n = 0;
    unsigned jobs = 0;
};

int cmd_bench(const BenchArgs& a, std::ostream& out)
{
    require_at_least(a.m, 1, "--m");
    require_at_least(a.n, 1, "--n");
    const FamilyParams params(a.m);
    for (Engine e : {Engine::Nested, Engine::Increment, Engine::ClosedForm}) {
        const auto t0 = std::chrono::steady_clock::now();
        const SeqTable table = generate(e, params, a.n, a.jobs);
        const auto t1 = std::chrono::steady_clock::now();
        nlohmann::ordered_json j;
        j["engine"] = to_string(e);
        j["m"] = a.m;
        j["n"] = a.n;
        j["last_value"] = table[a.n];
        j["timing"] = {{"seconds", std::chrono::duration<double>(t1 - t0).count()}};
        out << j.dump() << '\n';
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Nested-recurrence sequences a(n+1) = n - a^(m)(n) + a^(m+1)(n): generate, verify, compare with OEIS"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    SeqArgs seq;
    auto* seq_cmd = app.add_subcommand("seq", "Emit a(1..N), or a(0..N) with --zero-indexed");
    seq_cmd->add_option("--m", seq.m, "Family parameter m >= 1")->required();
    seq_cmd->add_option("--n", seq.n, "Last index N >= 1")->required();
    seq_cmd->add_option("--engine", seq.engine, "nested | increment | closed")->capture_default_str();
    seq_cmd->add_flag("--zero-indexed", seq.zero_indexed, "Use a(0) = 0 instead of a(1) = 1");
    seq_cmd->add_option("--format", seq.format, "plain | csv | json")->capture_default_str();
    seq_cmd->add_option("--out", seq.out, "Output path (default stdout)");
    seq_cmd->add_option("--jobs", seq.jobs, "Workers for the closed-form engine (0 = all cores)");

    HArgs h;
    auto* h_cmd = app.add_subcommand("h", "Emit h(1..N) from the closed form");
    h_cmd->add_option("--m", h.m, "Family parameter m >= 1")->required();
    h_cmd->add_option("--n", h.n, "Last index N >= 1")->required();
    h_cmd->add_option("--format", h.format, "plain | csv | json")->capture_default_str();
    h_cmd->add_option("--out", h.out, "Output path (default stdout)");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run verification sweeps; exit 0 iff all pass");
    verify_cmd->add_option("--m", verify.m, "Family parameter m >= 1")->required();
    verify_cmd->add_option("--max-n", verify.max_n, "Sweep a(1..N)")->required();
    verify_cmd->add_option("--checks", verify.checks, "Comma list of growth,identity,p1,p2,cross,freq")
        ->capture_default_str();
    verify_cmd->add_option("--jobs", verify.jobs, "Workers for partitionable sweeps (0 = all cores)")
        ->capture_default_str();
    verify_cmd->add_option("--format", verify.format, "plain | json")->capture_default_str();
    verify_cmd->add_option("--h-source", verify.h_source, "closed | table")->capture_default_str();

    SumsArgs sums;
    auto* sums_cmd = app.add_subcommand("sums", "Emit partial sums A_m(1..N)");
    sums_cmd->add_option("--m", sums.m, "Family parameter m >= 1")->required();
    sums_cmd->add_option("--n", sums.n, "Last index N >= 1")->required();
    sums_cmd->add_option("--oracle", sums.oracle, "lattice (m = 2 only): also check against the lattice count");
    sums_cmd->add_option("--format", sums.format, "plain | csv | json")->capture_default_str();
    sums_cmd->add_option("--out", sums.out, "Output path (default stdout)");

    OeisArgs oeis_args;
    auto* oeis_cmd = app.add_subcommand("oeis", "OEIS b-file tools");
    oeis_cmd->require_subcommand(1);
    auto* check_cmd = oeis_cmd->add_subcommand("check", "Check a correspondence against a b-file");
    check_cmd->add_option("--id", oeis_args.id, "OEIS A-number")->required();
    check_cmd->add_option("--m", oeis_args.m, "Family parameter m >= 1")->required();
    check_cmd->add_option("--quantity", oeis_args.quantity, "a | h | sums")->required();
    check_cmd->add_option("--bfile", oeis_args.bfile, "Local b-file path");
    check_cmd->add_flag("--fetch", oeis_args.fetch, "Allow downloading the b-file if it is not cached");
    check_cmd->add_option("--cache", oeis_args.cache, "Cache directory");
    check_cmd->add_option("--shift", oeis_args.shift, "index_shift,value_shift: OEIS(n+i) = q(n) + v");
    check_cmd->add_option("--n-max", oeis_args.n_max, "Largest n to check (default: full b-file overlap)");
    check_cmd->add_option("--format", oeis_args.format, "plain | json")->capture_default_str();
    auto* fetch_cmd = oeis_cmd->add_subcommand("fetch", "Download (or read from cache) a b-file");
    fetch_cmd->add_option("--id", oeis_args.id, "OEIS A-number")->required();
    fetch_cmd->add_option("--cache", oeis_args.cache, "Cache directory");
    fetch_cmd->add_option("--out", oeis_args.out, "Output path (default stdout)");

    ExploreArgs explore;
    auto* explore_cmd = app.add_subcommand("explore", "Run and classify a variant of the recurrence");
    explore_cmd->add_option("--m", explore.m, "Family parameter m >= 1")->required();
    explore_cmd->add_option("--n", explore.n, "Last index")->required();
    explore_cmd->add_option("--a1", explore.a1, "Initial value a(start-index)");
    explore_cmd->add_option("--start-index", explore.start_index, "0 or 1")->capture_default_str();
    explore_cmd->add_option("--rule", explore.rule, "p,q: run lengths N_k = p*k + q");
    explore_cmd->add_option("--format", explore.format, "json | plain")->capture_default_str();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time each engine on a(1..N)");
    bench_cmd->add_option("--m", bench.m, "Family parameter m >= 1")->required();
    bench_cmd->add_option("--n", bench.n, "Last index N >= 1")->required();
    bench_cmd->add_option("--jobs", bench.jobs, "Workers for the closed-form engine (0 = all cores)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& s : args)
        argv.push_back(s.c_str());
    if (argv.empty())
        argv.push_back("nestrec");

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (seq_cmd->parsed())
            return cmd_seq(seq, out, err);
        if (h_cmd->parsed())
            return cmd_h(h, out);
        if (verify_cmd->parsed())
            return cmd_verify(verify, out, err);
        if (sums_cmd->parsed())
            return cmd_sums(sums, out, err);
        if (check_cmd->parsed())
            return cmd_oeis_check(oeis_args, out);
        if (fetch_cmd->parsed())
            return cmd_oeis_fetch(oeis_args, out);
        if (explore_cmd->parsed())
            return cmd_explore(explore, out);
        if (bench_cmd->parsed())
            return cmd_bench(bench, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const oeis::NetworkError& e) {
        err << "network error: " << e.what() << '\n';
        return kIoError;
    } catch (const oeis::HttpStatus& e) {
        err << "network error: " << e.what() << '\n';
        return kIoError;
    } catch (const oeis::CacheWriteError& e) {
        err << "cache error: " << e.what() << '\n';
        return kIoError;
    } catch (const oeis::EmptyOverlap& e) {
        err << "check failed: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
    err << "usage error: no subcommand\n";
    return kUsage;
}

}  // namespace nestrec::cli
