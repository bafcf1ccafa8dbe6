#pragma once

/**
 * @file scriptdsl.hpp
 * @brief Line-based move-script language: parser, pretty-printer, executor,
 *        the built-in construction scripts, and the simple-embedding checker.
 *
 * @code
 *   manifold V(-3)
 *   blowup vertex s1 as sigma     # s1 -> -4, sigma -> -1
 *   expect b2=2 sigma=-2 chain=2
 *   rbd chain [s1] n=2 as B2
 * @endcode
 */

#include "kirby/error.hpp"
#include "kirby/handlecalc.hpp"
#include "kirby/plumbing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kirby {

/// Parse failure with a 1-based source position.
class ParseError : public Error
{
public:
    ParseError(ErrorCode code, int line, int col, const std::string& message)
        : Error(code, "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + message)
        , line_(line)
        , col_(col)
    {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int col() const noexcept { return col_; }

private:
    int line_;
    int col_;
};

struct Statement
{
    /// Move keyword, or "expect".
    std::string keyword;
    /// Argument tokens; bracket lists are single tokens with blanks removed.
    std::vector<std::string> args;
    int line = 0;

    [[nodiscard]] bool is_expect() const { return keyword == "expect"; }
    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const Statement& a, const Statement& b)
    {
        return a.keyword == b.keyword && a.args == b.args;
    }
};

struct MoveScript
{
    /// Start-manifold constructor, e.g. "V(-3)", "C(4)", "chain(-5,-2)", "B(3)", "E(1)", "empty", "start".
    std::string header;
    /// "#!" lines; carried into the output of a run.
    std::vector<std::string> notes;
    std::vector<Statement> statements;

    [[nodiscard]] std::size_t move_count() const;
    friend bool operator==(const MoveScript& a, const MoveScript& b)
    {
        return a.header == b.header && a.notes == b.notes && a.statements == b.statements;
    }
};

[[nodiscard]] MoveScript parse_script(const std::string& text);
[[nodiscard]] std::string print_script(const MoveScript& script);

/// Start expression for a header; "start" is not accepted here.
[[nodiscard]] HandleExpression construct_start(const std::string& header);
/// Plumbing graph for a header, when it describes one.
[[nodiscard]] std::optional<PlumbingGraph> construct_graph(const std::string& header);

struct ExecutionFailure
{
    ErrorCode code = ErrorCode::MoveRejected;
    /// Underlying error of a rejected move.
    ErrorCode cause = ErrorCode::MoveRejected;
    /// Number of moves executed when the failure happened (the failing move is step + 1
    /// for MoveRejected; expectations are checked after `step` moves).
    std::size_t step = 0;
    int line = 0;
    std::string message;
};

struct ExecuteOptions
{
    /// Used when the header is `start`.
    std::optional<HandleExpression> start;
    /// Cross-check the boundary claim against the plumbing graph at linear graph-level steps.
    bool check_boundary = true;
};

struct ExecutionResult
{
    Ledger ledger;
    HandleExpression final_expression;
    std::optional<ExecutionFailure> failure;
    /// graphs[k] is the plumbing graph after k moves, while moves stay graph-level.
    std::vector<PlumbingGraph> graphs;
    /// Description of the first move that left graph level, if any.
    std::optional<std::string> first_non_graph_move;
    std::vector<std::string> notes;

    [[nodiscard]] bool ok() const { return !failure; }
    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

[[nodiscard]] ExecutionResult execute(const MoveScript& script, const ExecuteOptions& options = {});
/// Convenience: DOT of the graph after `step` moves. Errors: StepOutOfRange.
[[nodiscard]] std::string graph_dot_at(const ExecutionResult& result, std::size_t step);

// --- built-in constructions --------------------------------------------------

/// V_{-(n+1)} -> blow-ups -> C_n -> B_n -> slides -> back to V_{-(n+1)}. n >= 2.
[[nodiscard]] MoveScript thm_a_script(int n);
/// V_{-4} -> blow-ups -> C_n -> B_n -> slides -> V_{-4} (odd n) or B_2 # CP^2-bar (even n). n >= 4.
[[nodiscard]] MoveScript thm_b_script(int n);
/// E(m) fishtail fiber -> blow-ups -> C_n -> rational blow-down to E(m)_n. n >= 2, m >= 1.
[[nodiscard]] MoveScript em_script(int n, int m = 1);
/// thm_a_script(n) stopped right after the rational blow-down.
[[nodiscard]] MoveScript thm_a_prefix_to_rbd(int n);

// --- simple embeddings --------------------------------------------------------

struct DiagramReport
{
    Ledger path_up;
    Ledger path_down;
    bool verdict = false;
    std::vector<std::string> mismatches;
    std::optional<ExecutionFailure> up_failure;
    std::optional<ExecutionFailure> down_failure;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Runs both paths from `start`. Either argument may hold either path; each is
/// classified by its move structure (one rbu then n-1 blow-downs, or n-1
/// blow-ups then one rbd; slides and handle-pair moves are neutral).
/// Errors: MalformedPath.
[[nodiscard]] DiagramReport check_simple_diagram(const HandleExpression& start, const MoveScript& up,
                                                 const MoveScript& down, int n);

enum class SimpleCase { A, B, Em };

struct SimpleCaseScripts
{
    HandleExpression start;
    MoveScript up;
    MoveScript down;
    bool expected_simple = true;
};

[[nodiscard]] SimpleCaseScripts simple_case(SimpleCase c, int n, int m = 1);

}  // namespace kirby
