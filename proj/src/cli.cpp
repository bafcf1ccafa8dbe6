#include "kirby/cli.hpp"

#include "kirby/error.hpp"
#include "kirby/plumbing.hpp"
#include "kirby/scriptdsl.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

namespace kirby {

namespace {

struct VerifyOutcome
{
    int n = 0;
    bool pass = false;
    std::string summary;
    nlohmann::ordered_json detail;
};

[[nodiscard]] std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::InvalidParameter, "cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::InvalidParameter, "cannot write '" + path + "'");
    }
    out << text;
}

[[nodiscard]] std::string endpoint_text(const HandleExpression& h)
{
    std::string pieces;
    for (const auto& p : h.pieces()) {
        pieces += (pieces.empty() ? "" : ",") + p.kind;
    }
    return "form=" + h.form().to_string() + " pieces=[" + pieces + "]";
}

[[nodiscard]] VerifyOutcome verify_script(int n, const MoveScript& script)
{
    VerifyOutcome o;
    o.n = n;
    const ExecutionResult r = execute(script);
    o.pass = r.ok();
    o.detail = r.to_json();
    if (r.ok()) {
        o.summary = endpoint_text(r.final_expression);
    } else {
        o.summary = std::string(to_string(r.failure->code)) + " after step " + std::to_string(r.failure->step) +
                    ": " + r.failure->message;
    }
    return o;
}

[[nodiscard]] VerifyOutcome verify_one(const std::string& what, int n, int m, SimpleCase c)
{
    if (what == "A") {
        return verify_script(n, thm_a_script(n));
    }
    if (what == "B") {
        VerifyOutcome o = verify_script(n, thm_b_script(n));
        o.summary = std::string(n % 2 ? "odd endpoint " : "even endpoint ") + o.summary;
        return o;
    }
    if (what == "em") {
        return verify_script(n, em_script(n, m));
    }
    const SimpleCaseScripts s = simple_case(c, n, m);
    const DiagramReport rep = check_simple_diagram(s.start, s.up, s.down, n);
    VerifyOutcome o;
    o.n = n;
    o.pass = rep.verdict == s.expected_simple;
    o.detail = rep.to_json();
    o.detail["expected"] = s.expected_simple ? "simple" : "not simple";
    o.summary = rep.verdict ? "simple" : "not simple";
    for (const auto& mm : rep.mismatches) {
        o.summary += "; " + mm;
    }
    return o;
}

/// Builds the scripts up front so bad parameters surface as usage errors.
void precheck(const std::string& what, int n, int m, SimpleCase c)
{
    if (what == "A") {
        (void)thm_a_script(n);
    } else if (what == "B") {
        (void)thm_b_script(n);
    } else if (what == "em") {
        (void)em_script(n, m);
    } else if (c == SimpleCase::A) {
        (void)simple_case(c, n, m);
    } else if (c == SimpleCase::B) {
        if (n < 3 || n % 2 == 0) {
            throw Error(ErrorCode::InvalidParameter, "case b needs odd n >= 3, got " + std::to_string(n));
        }
    } else if (n < 2 || m < 1) {
        throw Error(ErrorCode::InvalidParameter, "case em needs n >= 2 and m >= 1");
    }
}

[[nodiscard]] std::vector<long long> parse_framings(const std::string& text)
{
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    static const std::regex re("\\s*[+-]?[0-9]{1,15}\\s*");
    while (std::getline(ss, item, ',')) {
        if (!std::regex_match(item, re)) {
            throw Error(ErrorCode::InvalidParameter, "bad framing '" + item + "'");
        }
        out.push_back(std::stoll(item));
    }
    if (out.empty()) {
        throw Error(ErrorCode::EmptyInput, "no framings given");
    }
    return out;
}

}  // namespace

NRange parse_n_range(const std::string& text)
{
    static const std::regex single("([0-9]{1,6})");
    static const std::regex range("([0-9]{1,6})\\.\\.([0-9]{1,6})");
    std::smatch m;
    NRange r;
    if (std::regex_match(text, m, single)) {
        r.lo = r.hi = std::stoi(m[1].str());
    } else if (std::regex_match(text, m, range)) {
        r.lo = std::stoi(m[1].str());
        r.hi = std::stoi(m[2].str());
    } else {
        throw Error(ErrorCode::InvalidParameter, "bad n range '" + text + "' (use N or LO..HI)");
    }
    if (r.lo > r.hi) {
        throw Error(ErrorCode::InvalidParameter, "empty n range '" + text + "'");
    }
    return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Replays rational blow-down constructions on handle expressions and checks invariant ledgers",
                 "kirby"};
    app.require_subcommand(1);

    std::string framings;
    std::string format = "text";
    auto* boundary = app.add_subcommand("boundary", "Boundary lens space of a linear plumbing");
    boundary->add_option("--framings", framings, "Comma-separated framings, e.g. -5,-2")->required();
    boundary->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    std::string theorem;
    std::string n_text;
    int m = 1;
    std::string case_name = "a";
    std::string out_path;
    auto* verify = app.add_subcommand("verify", "Run the built-in constructions for a value or range of n");
    verify->add_option("theorem", theorem, "A, B, em or simple")->required()->check(
        CLI::IsMember({"A", "B", "em", "simple"}));
    verify->add_option("--n", n_text, "N or LO..HI")->required();
    verify->add_option("--m", m, "E(m) parameter")->check(CLI::Range(1, 1000));
    verify->add_option("--case", case_name, "Case for 'simple': a, b or em")->check(CLI::IsMember({"a", "b", "em"}));
    verify->add_option("--out", out_path, "Write the full JSON report here");
    verify->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    std::string script_path;
    auto* run = app.add_subcommand("run", "Parse and execute a move script");
    run->add_option("script", script_path)->required();
    run->add_option("--out", out_path, "Write the JSON ledger here instead of stdout");
    std::string run_format = "json";
    run->add_option("--format", run_format)->check(CLI::IsMember({"json", "text"}));

    std::size_t step = 0;
    auto* dot = app.add_subcommand("dot", "Render the plumbing graph after a step as DOT");
    dot->add_option("script", script_path)->required();
    dot->add_option("--step", step)->required();

    std::string which;
    int emit_n = 0;
    auto* emit = app.add_subcommand("emit", "Print a built-in script");
    emit->add_option("script", which, "A, B or em")->required()->check(CLI::IsMember({"A", "B", "em"}));
    emit->add_option("--n", emit_n)->required();
    emit->add_option("--m", m)->check(CLI::Range(1, 1000));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*boundary) {
            const PlumbingGraph g = build_linear(parse_framings(framings));
            const LensSpace lens = boundary_lens(g);
            ContinuedFraction cf;
            for (long long f : parse_framings(framings)) {
                cf.coefficients.emplace_back(f);
            }
            const Rational value = cf_eval(cf);
            if (format == "json") {
                nlohmann::ordered_json j;
                j["framings"] = parse_framings(framings);
                j["value"] = to_string(value);
                j["boundary"] = lens.to_string();
                out << j.dump(2) << '\n';
            } else {
                out << lens.to_string() << "  (continued fraction " << to_string(value) << ")\n";
            }
            return kExitOk;
        }

        if (*verify) {
            const NRange range = parse_n_range(n_text);
            const SimpleCase c = case_name == "b" ? SimpleCase::B : case_name == "em" ? SimpleCase::Em : SimpleCase::A;
            std::vector<int> ns;
            for (int n = range.lo; n <= range.hi; ++n) {
                if (theorem == "simple" && c == SimpleCase::B && n % 2 == 0 && range.lo != range.hi) {
                    continue;  // even n have no case-b diagram; skip them inside a range
                }
                precheck(theorem, n, m, c);
                ns.push_back(n);
            }
            std::vector<std::future<VerifyOutcome>> jobs;
            for (int n : ns) {
                jobs.push_back(std::async(std::launch::async, verify_one, theorem, n, m, c));
            }
            bool all = true;
            nlohmann::ordered_json report;
            report["theorem"] = theorem;
            if (theorem == "simple") {
                report["case"] = case_name;
            }
            if (theorem == "em" || (theorem == "simple" && c == SimpleCase::Em)) {
                report["m"] = m;
            }
            nlohmann::ordered_json results = nlohmann::ordered_json::array();
            std::ostringstream text;
            for (auto& job : jobs) {
                VerifyOutcome o = job.get();
                all = all && o.pass;
                text << theorem << " n=" << std::setw(3) << o.n << "  " << (o.pass ? "PASS" : "FAIL") << "  "
                     << o.summary << '\n';
                nlohmann::ordered_json r;
                r["n"] = o.n;
                r["status"] = o.pass ? "pass" : "fail";
                r["summary"] = o.summary;
                r["detail"] = std::move(o.detail);
                results.push_back(std::move(r));
            }
            report["all_pass"] = all;
            report["results"] = std::move(results);
            if (!out_path.empty()) {
                write_file(out_path, report.dump(2) + "\n");
            }
            if (format == "json" && out_path.empty()) {
                out << report.dump(2) << '\n';
            } else {
                out << text.str();
                out << (all ? "all pass" : "FAILURES") << " (" << ns.size() << " value(s) of n)\n";
            }
            return all ? kExitOk : kExitFailure;
        }

        if (*run) {
            MoveScript script;
            try {
                script = parse_script(read_file(script_path));
            } catch (const Error& e) {
                err << script_path << ": " << e.what() << '\n';
                return kExitUsage;
            }
            const ExecutionResult r = execute(script);
            const std::string body = run_format == "text" ? r.ledger.to_text() : r.to_json().dump(2) + "\n";
            if (!out_path.empty()) {
                write_file(out_path, body);
            } else {
                out << body;
            }
            for (const auto& note : r.notes) {
                err << "note: " << note << '\n';
            }
            if (!r.ok()) {
                err << to_string(r.failure->code) << " (" << to_string(r.failure->cause) << ") at step "
                    << r.failure->step << ", line " << r.failure->line << ": " << r.failure->message << '\n';
                return kExitFailure;
            }
            return kExitOk;
        }

        if (*dot) {
            MoveScript script;
            try {
                script = parse_script(read_file(script_path));
            } catch (const Error& e) {
                err << script_path << ": " << e.what() << '\n';
                return kExitUsage;
            }
            ExecuteOptions opts;
            const ExecutionResult r = execute(script, opts);
            try {
                out << graph_dot_at(r, step);
            } catch (const Error& e) {
                err << e.what() << '\n';
                return kExitUsage;
            }
            return kExitOk;
        }

        if (*emit) {
            if (which == "A") {
                out << print_script(thm_a_script(emit_n));
            } else if (which == "B") {
                out << print_script(thm_b_script(emit_n));
            } else {
                out << print_script(em_script(emit_n, m));
            }
            return kExitOk;
        }
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace kirby
