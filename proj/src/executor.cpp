#include "kirby/scriptdsl.hpp"

#include "script_detail.hpp"

#include <algorithm>
#include <regex>

namespace kirby {

namespace {

using detail::parse_integer;
using detail::parse_small_int;
using detail::split_list;
using detail::split_once;

struct Ctor
{
    std::string name;
    std::vector<std::string> args;
};

[[nodiscard]] Ctor split_ctor(const std::string& header)
{
    static const std::regex re(R"(([A-Za-z]+)\((.*)\))");
    std::smatch m;
    if (std::regex_match(header, m, re)) {
        Ctor c{m[1].str(), split_list("[" + m[2].str() + "]")};
        return c;
    }
    return Ctor{header, {}};
}

void require_args(const Ctor& c, std::size_t n)
{
    if (c.args.size() != n) {
        throw Error(ErrorCode::SyntaxError, "constructor '" + c.name + "' takes " + std::to_string(n) +
                                                " argument(s), got " + std::to_string(c.args.size()));
    }
}

struct State
{
    HandleExpression h;
    std::optional<PlumbingGraph> g;
};

[[nodiscard]] int sign_arg(const std::vector<std::string>& args, std::size_t idx)
{
    return (idx < args.size() && args[idx] == "-") ? -1 : 1;
}

[[nodiscard]] Label new_label(const State& s, const std::string& prefix)
{
    for (const Label& l : s.h.fresh_labels(prefix, 64)) {
        if (!s.g || !s.g->has_vertex(l)) {
            return l;
        }
    }
    return s.h.fresh_label(prefix + "x");
}

void leave_graph(State& s) { s.g.reset(); }

/// Applies one move to the expression and, while it stays a plumbing, to the graph.
void apply_move(State& s, const Statement& st)
{
    const auto& a = st.args;
    const std::string& kw = st.keyword;

    if (kw == "blowup") {
        std::optional<Label> as;
        std::size_t end = a.size();
        if (end >= 2 && a[end - 2] == "as") {
            as = a[end - 1];
            end -= 2;
        }
        const Label e = as ? *as : new_label(s, "e");
        if (end == 0) {
            s.h = blow_up(s.h, e);
            if (s.g) {
                s.g->add_vertex(e, -1);
            }
        } else if (a[0] == "vertex") {
            const Label& x = a[1];
            if (s.g) {
                s.g = blow_up_vertex(*s.g, x, e);
            }
            HandleExpression next = blow_up(s.h, e);
            s.h = slide(next, x, e, -1);
        } else {
            const Label& x = a[1];
            const Label& y = a[2];
            if (s.g) {
                s.g = blow_up_edge(*s.g, make_edge(x, y), e);
            }
            HandleExpression next = blow_up(s.h, e);
            next = slide(next, x, e, -1);
            s.h = slide(next, y, e, -1);
        }
        return;
    }
    if (kw == "blowdown") {
        s.h = blow_down(s.h, a[0]);
        if (s.g) {
            try {
                s.g = blow_down_vertex(*s.g, a[0]);
            } catch (const Error&) {
                leave_graph(s);
            }
        }
        return;
    }

    leave_graph(s);
    if (kw == "slide") {
        s.h = slide(s.h, a[0], a[2], sign_arg(a, 3));
    } else if (kw == "cancelpair") {
        s.h = remove_cancelling_pair(s.h, a[0], a[1]);
    } else if (kw == "uncancelpair") {
        std::optional<Label> d;
        std::optional<Label> z;
        std::map<Label, Integer> links;
        std::size_t i = 0;
        if (i < a.size() && a[i] != "link") {
            d = a[i];
            z = a[i + 1];
            i += 2;
        }
        if (i < a.size()) {
            for (const auto& item : split_list(a[i + 1])) {
                auto [x, k] = split_once(item, '=');
                links[x] += parse_integer(k);
            }
        }
        s.h = add_cancelling_pair(s.h, d, z, links);
    } else if (kw == "rbd") {
        const std::vector<Label> chain = split_list(a[1]);
        const int n = parse_small_int(a[2].substr(2));
        std::optional<std::string> as;
        if (a.size() == 5) {
            as = a[4];
        }
        s.h = rational_blow_down(s.h, chain, n, as);
    } else if (kw == "rbu") {
        const std::string& piece = a[0];
        const auto pi = s.h.piece_index(piece);
        if (!pi) {
            throw Error(ErrorCode::UnknownPiece, "no piece named '" + piece + "'");
        }
        const int n = s.h.pieces()[*pi].bn;
        std::vector<Label> chain;
        std::size_t i = 1;
        if (i < a.size() && a[i] == "chain") {
            chain = split_list(a[i + 1]);
            i += 2;
        } else if (n >= 2) {
            chain = s.h.fresh_labels("c", static_cast<std::size_t>(n - 1));
        }
        std::vector<ChainCoupling> couplings;
        if (i < a.size()) {
            for (const auto& item : split_list(a[i + 1])) {
                auto [lhs, k] = split_once(item, '=');
                auto [x, sphere] = split_once(lhs, '.');
                std::size_t idx = 0;
                if (auto it = std::find(chain.begin(), chain.end(), sphere); it != chain.end()) {
                    idx = static_cast<std::size_t>(it - chain.begin());
                } else if (std::all_of(sphere.begin(), sphere.end(), ::isdigit)) {
                    const int one_based = parse_small_int(sphere);
                    if (one_based < 1) {
                        throw Error(ErrorCode::InvalidCoupling, "chain positions start at 1");
                    }
                    idx = static_cast<std::size_t>(one_based - 1);
                } else {
                    throw Error(ErrorCode::InvalidCoupling, "'" + sphere + "' is not a sphere of the new chain");
                }
                couplings.push_back(ChainCoupling{x, idx, parse_integer(k)});
            }
        }
        s.h = rational_blow_up(s.h, piece, chain, couplings);
    } else if (kw == "seal") {
        std::optional<std::string> as;
        if (a.size() == 4) {
            as = a[3];
        }
        s.h = seal_bn(s.h, a[0], a[1], as);
    } else if (kw == "unseal") {
        const auto pair = split_list(a[2]);
        std::map<Label, BallCoupling> couplings;
        if (a.size() == 5) {
            for (const auto& item : split_list(a[4])) {
                auto [x, ac] = split_once(item, '=');
                auto [w, k] = split_once(ac, ':');
                if (couplings.contains(x)) {
                    throw Error(ErrorCode::InvalidCoupling, "'" + x + "' coupled twice");
                }
                couplings[x] = BallCoupling{parse_integer(w), parse_integer(k)};
            }
        }
        s.h = unseal_bn(s.h, a[0], pair[0], pair[1], couplings);
    } else {
        throw Error(ErrorCode::UnknownMove, "unknown move '" + kw + "'");
    }
}

[[nodiscard]] bool pieces_match(std::vector<std::string> expected, std::vector<std::string> actual)
{
    if (expected.size() != actual.size()) {
        return false;
    }
    std::sort(expected.begin(), expected.end());
    std::vector<bool> used(actual.size(), false);
    for (const auto& e : expected) {
        const bool need_glued = !e.empty() && e.back() == '*';
        bool found = false;
        for (std::size_t i = 0; i < actual.size() && !found; ++i) {
            if (used[i]) {
                continue;
            }
            std::string act = actual[i];
            if (!need_glued && !act.empty() && act.back() == '*') {
                act.pop_back();
            }
            if (act == e) {
                used[i] = true;
                found = true;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

[[nodiscard]] std::string pieces_string(const std::vector<std::string>& p)
{
    std::string out = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        out += (i ? "," : "") + p[i];
    }
    return out + "]";
}

/// Returns a description of every failed assertion in `st`.
[[nodiscard]] std::vector<std::string> check_expectations(const HandleExpression& h, const Statement& st)
{
    const Invariants inv = invariants(h);
    std::vector<std::string> bad;
    auto report = [&](const std::string& key, const std::string& expected, const std::string& actual) {
        bad.push_back(key + ": expected " + expected + ", actual " + actual);
    };
    for (const auto& t : st.args) {
        const auto eq = t.find('=');
        const std::string key = t.substr(0, eq);
        const std::string val = t.substr(eq + 1);
        auto check_int = [&](long long actual) {
            if (parse_integer(val) != actual) {
                report(key, val, std::to_string(actual));
            }
        };
        if (key == "b1") {
            check_int(inv.b1);
        } else if (key == "b2") {
            check_int(inv.b2);
        } else if (key == "euler" || key == "chi") {
            check_int(inv.euler);
        } else if (key == "sigma") {
            check_int(inv.sigma);
        } else if (key == "handles") {
            check_int(static_cast<long long>(h.two_handle_count()));
        } else if (key == "onehandles") {
            check_int(static_cast<long long>(h.one_handle_count()));
        } else if (key == "det") {
            if (parse_rational(val) != inv.det) {
                report(key, val, to_string(inv.det));
            }
        } else if (key == "torsion") {
            if (val == "?") {
                if (inv.torsion) {
                    report(key, val, torsion_string(inv.torsion));
                }
            } else {
                std::vector<Integer> want;
                for (const auto& v : split_list(val)) {
                    want.push_back(parse_integer(v));
                }
                std::sort(want.begin(), want.end());
                if (!inv.torsion || *inv.torsion != want) {
                    report(key, val, torsion_string(inv.torsion));
                }
            }
        } else if (key == "boundary") {
            const LensSpace want = parse_lens(val);
            if (!inv.boundary || !lens_equal(want, *inv.boundary)) {
                report(key, val, inv.boundary ? inv.boundary->to_string() : "unknown");
            }
        } else if (key == "form") {
            if (detail::parse_matrix(val) != h.form().entries()) {
                report(key, val, h.form().to_string());
            }
        } else if (key == "pieces") {
            if (!pieces_match(split_list(val), inv.pieces)) {
                report(key, val, pieces_string(inv.pieces));
            }
        } else if (key == "chain") {
            const int n = parse_small_int(val);
            const auto chains = find_cn_chains(h, n);
            if (chains.size() != 1) {
                report(key, val, std::to_string(chains.size()) + " C_" + val + " chains");
            }
        }
    }
    return bad;
}

void cross_check_boundary(const State& s)
{
    if (!s.g || s.g->empty() || !s.h.boundary_claim()) {
        return;
    }
    LensSpace from_graph;
    try {
        (void)linear_order(*s.g);
        from_graph = boundary_lens(*s.g);
    } catch (const Error&) {
        return;
    }
    if (!lens_equal(from_graph, *s.h.boundary_claim())) {
        throw Error(ErrorCode::UnsupportedConfiguration, "plumbing boundary " + from_graph.to_string() +
                                                             " disagrees with claim " +
                                                             s.h.boundary_claim()->to_string());
    }
}

}  // namespace

HandleExpression construct_start(const std::string& header)
{
    const Ctor c = split_ctor(header);
    if (c.name == "V" || c.name == "C" || c.name == "chain" || c.name == "empty") {
        return from_plumbing(*construct_graph(header));
    }
    if (c.name == "B") {
        require_args(c, 1);
        return bn_expression(parse_small_int(c.args[0]));
    }
    if (c.name == "E") {
        require_args(c, 1);
        return elliptic_expression(parse_small_int(c.args[0]));
    }
    throw Error(ErrorCode::SyntaxError, "unknown manifold constructor '" + header + "'");
}

std::optional<PlumbingGraph> construct_graph(const std::string& header)
{
    const Ctor c = split_ctor(header);
    if (c.name == "V") {
        require_args(c, 1);
        return build_linear(std::vector<long long>{parse_small_int(c.args[0])});
    }
    if (c.name == "C") {
        require_args(c, 1);
        return build_linear(cn_fraction(parse_small_int(c.args[0])));
    }
    if (c.name == "chain") {
        if (c.args.empty()) {
            throw Error(ErrorCode::SyntaxError, "chain() needs at least one framing");
        }
        std::vector<long long> f;
        for (const auto& v : c.args) {
            f.push_back(parse_small_int(v));
        }
        return build_linear(f);
    }
    if (c.name == "empty" && c.args.empty()) {
        return PlumbingGraph{};
    }
    return std::nullopt;
}

ExecutionResult execute(const MoveScript& script, const ExecuteOptions& options)
{
    ExecutionResult result;
    result.notes = script.notes;
    State s;
    try {
        if (script.header == "start") {
            if (!options.start) {
                throw Error(ErrorCode::InvalidParameter, "header 'start' needs a supplied start expression");
            }
            s.h = *options.start;
        } else {
            s.h = construct_start(script.header);
            s.g = construct_graph(script.header);
        }
    } catch (const Error& e) {
        result.failure = ExecutionFailure{ErrorCode::MoveRejected, e.code(), 0, 1, e.what()};
        result.final_expression = s.h;
        return result;
    }
    result.ledger.record("start", {script.header}, s.h);
    if (s.g) {
        result.graphs.push_back(*s.g);
    }

    std::size_t step = 0;
    for (const Statement& st : script.statements) {
        if (st.is_expect()) {
            std::vector<std::string> bad;
            try {
                bad = check_expectations(s.h, st);
            } catch (const Error& e) {
                bad.push_back(e.what());
            }
            if (!bad.empty()) {
                std::string msg;
                for (std::size_t i = 0; i < bad.size(); ++i) {
                    msg += (i ? "; " : "") + bad[i];
                }
                result.failure =
                    ExecutionFailure{ErrorCode::ExpectationFailed, ErrorCode::ExpectationFailed, step, st.line, msg};
                break;
            }
            continue;
        }
        const bool was_graph = s.g.has_value();
        try {
            apply_move(s, st);
            if (options.check_boundary) {
                cross_check_boundary(s);
            }
        } catch (const Error& e) {
            result.failure = ExecutionFailure{ErrorCode::MoveRejected, e.code(), step, st.line,
                                              "line " + std::to_string(st.line) + " '" + st.to_string() +
                                                  "': " + e.what()};
            break;
        }
        ++step;
        result.ledger.record(st.keyword, st.args, s.h);
        if (s.g) {
            result.graphs.push_back(*s.g);
        } else if (was_graph) {
            result.first_non_graph_move = "step " + std::to_string(step) + " (line " + std::to_string(st.line) +
                                          "): " + st.to_string();
        }
    }
    result.final_expression = s.h;
    return result;
}

std::string graph_dot_at(const ExecutionResult& result, std::size_t step)
{
    if (step < result.graphs.size()) {
        return to_dot(result.graphs[step]);
    }
    std::string why = result.first_non_graph_move ? "first non-graph move is " + *result.first_non_graph_move
                                                  : "script has " + std::to_string(result.graphs.size()) +
                                                        " graph-level states";
    if (result.graphs.empty()) {
        why = "the start manifold is not a plumbing";
    }
    throw Error(ErrorCode::StepOutOfRange, "step " + std::to_string(step) + " is outside the graph-level prefix; " +
                                               why);
}

nlohmann::ordered_json ExecutionResult::to_json() const
{
    nlohmann::ordered_json j = ledger.to_json();
    j["notes"] = notes;
    j["status"] = failure ? "failed" : "ok";
    if (failure) {
        j["failure"] = {{"error", std::string(kirby::to_string(failure->code))},
                        {"cause", std::string(kirby::to_string(failure->cause))},
                        {"step", failure->step},
                        {"line", failure->line},
                        {"message", failure->message}};
    }
    j["final"] = kirby::to_json(final_expression);
    return j;
}

}  // namespace kirby
