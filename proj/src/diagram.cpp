#include "kirby/scriptdsl.hpp"

#include <algorithm>

namespace kirby {

namespace {

enum class PathKind { Up, Down, Malformed };

/// Manifold-changing moves in order; slides and handle-pair moves are neutral.
[[nodiscard]] std::vector<std::string> changing_moves(const MoveScript& s)
{
    std::vector<std::string> out;
    for (const auto& st : s.statements) {
        if (st.keyword == "blowup" || st.keyword == "blowdown" || st.keyword == "rbd" || st.keyword == "rbu") {
            out.push_back(st.keyword);
        }
    }
    return out;
}

[[nodiscard]] PathKind classify(const MoveScript& s, int n)
{
    const auto moves = changing_moves(s);
    const auto count = static_cast<std::size_t>(n);
    if (moves.size() != count) {
        return PathKind::Malformed;
    }
    if (moves.front() == "rbu" &&
        std::all_of(moves.begin() + 1, moves.end(), [](const std::string& m) { return m == "blowdown"; })) {
        return PathKind::Up;
    }
    if (moves.back() == "rbd" &&
        std::all_of(moves.begin(), moves.end() - 1, [](const std::string& m) { return m == "blowup"; })) {
        return PathKind::Down;
    }
    return PathKind::Malformed;
}

void compare(const Invariants& start, const Invariants& end, const std::string& path,
             std::vector<std::string>& mismatches)
{
    auto diff = [&](const std::string& key, const std::string& a, const std::string& b) {
        mismatches.push_back(path + " " + key + ": start " + a + ", end " + b);
    };
    auto pieces = [](const std::vector<std::string>& p) {
        std::string out = "[";
        for (std::size_t i = 0; i < p.size(); ++i) {
            out += (i ? "," : "") + p[i];
        }
        return out + "]";
    };
    if (start.b1 != end.b1) {
        diff("b1", std::to_string(start.b1), std::to_string(end.b1));
    }
    if (start.b2 != end.b2) {
        diff("b2", std::to_string(start.b2), std::to_string(end.b2));
    }
    if (start.euler != end.euler) {
        diff("euler", std::to_string(start.euler), std::to_string(end.euler));
    }
    if (start.sigma != end.sigma) {
        diff("sigma", std::to_string(start.sigma), std::to_string(end.sigma));
    }
    const bool same_boundary = (!start.boundary && !end.boundary) ||
                               (start.boundary && end.boundary && lens_equal(*start.boundary, *end.boundary));
    if (!same_boundary) {
        diff("boundary", start.boundary ? start.boundary->to_string() : "none",
             end.boundary ? end.boundary->to_string() : "none");
    }
    if (start.pieces != end.pieces) {
        diff("pieces", pieces(start.pieces), pieces(end.pieces));
    }
}

}  // namespace

DiagramReport check_simple_diagram(const HandleExpression& start, const MoveScript& up, const MoveScript& down,
                                   int n)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "simple embedding check needs n >= 2");
    }
    const PathKind ku = classify(up, n);
    const PathKind kd = classify(down, n);
    if (ku == PathKind::Malformed || kd == PathKind::Malformed || ku == kd) {
        throw Error(ErrorCode::MalformedPath, "need one path 'rbu then " + std::to_string(n - 1) +
                                                  " blowdowns' and one path '" + std::to_string(n - 1) +
                                                  " blowups then rbd'");
    }
    const MoveScript& real_up = ku == PathKind::Up ? up : down;
    const MoveScript& real_down = ku == PathKind::Up ? down : up;

    ExecuteOptions opts;
    opts.start = start;
    const ExecutionResult ru = execute(real_up, opts);
    const ExecutionResult rd = execute(real_down, opts);

    DiagramReport report;
    report.path_up = ru.ledger;
    report.path_down = rd.ledger;
    report.up_failure = ru.failure;
    report.down_failure = rd.failure;

    const Invariants base = invariants(start);
    if (ru.failure) {
        report.mismatches.push_back("up path rejected: " + ru.failure->message);
    } else {
        compare(base, invariants(ru.final_expression), "up", report.mismatches);
    }
    if (rd.failure) {
        report.mismatches.push_back("down path rejected: " + rd.failure->message);
    } else {
        compare(base, invariants(rd.final_expression), "down", report.mismatches);
    }
    report.verdict = report.mismatches.empty();
    return report;
}

nlohmann::ordered_json DiagramReport::to_json() const
{
    nlohmann::ordered_json j;
    j["verdict"] = verdict ? "simple" : "not simple";
    j["mismatches"] = mismatches;
    j["up"] = path_up.to_json();
    j["down"] = path_down.to_json();
    return j;
}

}  // namespace kirby
