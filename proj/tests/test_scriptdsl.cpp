#include "kirby/error.hpp"
#include "kirby/scriptdsl.hpp"

#include <doctest.h>

#include <functional>

using namespace kirby;

namespace {

ParseError parse_error(const std::string& text)
{
    try {
        (void)parse_script(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("script parsed: " << text);
    return ParseError(ErrorCode::SyntaxError, 0, 0, "");
}

MoveScript without_expectations(MoveScript s)
{
    std::erase_if(s.statements, [](const Statement& st) { return st.is_expect(); });
    return s;
}

}  // namespace

TEST_CASE("grammar examples")
{
    const MoveScript s = parse_script("manifold V(-3)\nblowup vertex s1\nexpect b2=2 sigma=-2");
    CHECK(s.header == "V(-3)");
    CHECK(s.statements.size() == 2);
    CHECK(s.move_count() == 1);

    const MoveScript r = parse_script("manifold C(4)\nrbd chain [a, b, c] n=4");
    REQUIRE(r.statements.size() == 1);
    CHECK(r.statements[0].args == std::vector<std::string>{"chain", "[a,b,c]", "n=4"});

    const MoveScript c = parse_script("# leading comment\n\nmanifold B(3)  # trailing\n#! kept note\n");
    CHECK(c.notes == std::vector<std::string>{"kept note"});
}

TEST_CASE("positioned diagnostics")
{
    const ParseError arity = parse_error("manifold V(-3)\nslide x over");
    CHECK(arity.code() == ErrorCode::ArityError);
    CHECK(arity.line() == 2);
    CHECK(std::string(arity.what()).find("at token 3") != std::string::npos);

    const ParseError unknown = parse_error("manifold V(-3)\n\n  twist s1");
    CHECK(unknown.code() == ErrorCode::UnknownMove);
    CHECK(unknown.line() == 3);
    CHECK(unknown.col() == 3);

    const ParseError bad_char = parse_error("manifold V(-3)\nblowdown s1 ;");
    CHECK(bad_char.code() == ErrorCode::SyntaxError);
    CHECK(bad_char.col() == 13);

    CHECK(parse_error("blowup\n").code() == ErrorCode::SyntaxError);
    CHECK(parse_error("manifold V(-3)\nrbd chain [a,b n=3").code() == ErrorCode::SyntaxError);
    CHECK(parse_error("manifold V(-3)\nexpect colour=3").code() == ErrorCode::SyntaxError);
    CHECK(parse_error("manifold V(-3)\nexpect b2=x").code() == ErrorCode::SyntaxError);
    CHECK(parse_error("manifold W(2)").code() == ErrorCode::SyntaxError);
    CHECK(parse_error("manifold V(-3)\nblowdown a b").code() == ErrorCode::ArityError);
    CHECK(parse_error("manifold V(-3)\nslide a over b *").code() == ErrorCode::SyntaxError);
    CHECK(parse_error("manifold V(-3)\nunseal P as [d] couple []").code() == ErrorCode::SyntaxError);
}

TEST_CASE("parse . print . parse is idempotent")
{
    std::vector<MoveScript> scripts{thm_a_script(5), thm_b_script(6), thm_b_script(7), em_script(4, 2)};
    scripts.push_back(parse_script(
        "manifold chain(-5, -2)\n#! hand written\nuncancelpair d z link [s1 = 1]\nslide s1 over z\n"
        "slide s1 over z -\ncancelpair d z\nrbd chain [s1,s2] n=3 as P\nrbu P couple [ ]\n"
        "expect torsion=? pieces=[B3] form=[[ -1 ]] det=-1/9"));
    for (const MoveScript& s : scripts) {
        const std::string once = print_script(s);
        const MoveScript again = parse_script(once);
        CHECK(again == s);
        CHECK(print_script(again) == once);
    }
}

TEST_CASE("execute: construction of the smallest case")
{
    const ExecutionResult r = execute(thm_a_script(2));
    REQUIRE(r.ok());
    CHECK(r.final_expression.form().to_string() == "[[-3]]");
    const auto& steps = r.ledger.steps();
    const Invariants& first = steps.front().invariants;
    const Invariants& last = steps.back().invariants;
    CHECK(first == last);
    CHECK(first.euler == 2);
    CHECK(first.sigma == -1);
    CHECK(first.b2 == 1);
    CHECK(steps[1].invariants.euler == 3);
    CHECK(steps[1].invariants.sigma == -2);
    CHECK(steps[1].invariants.b2 == 2);
    CHECK(steps[2].move == "rbd");
    CHECK(steps[2].invariants.euler == 2);
    CHECK(steps[2].invariants.b2 == 1);
}

TEST_CASE("boundary claim is L(n+1,1) at every step")
{
    for (int n = 2; n <= 9; ++n) {
        const ExecutionResult r = execute(thm_a_script(n));
        REQUIRE(r.ok());
        for (const auto& st : r.ledger.steps()) {
            REQUIRE(st.invariants.boundary.has_value());
            CHECK(lens_equal(*st.invariants.boundary, LensSpace{Integer(n + 1), Integer(1)}));
        }
    }
}

TEST_CASE("fault injection and expectation failures")
{
    MoveScript broken = without_expectations(thm_a_script(4));
    broken.header = "V(-6)";
    const ExecutionResult r = execute(broken);
    REQUIRE_FALSE(r.ok());
    CHECK(r.failure->code == ErrorCode::MoveRejected);
    CHECK(r.failure->cause == ErrorCode::ChainMismatch);
    CHECK(r.failure->step == 3);
    CHECK(r.ledger.steps().size() == 4);  // start plus the three blow-ups

    const ExecutionResult e = execute(parse_script("manifold V(-4)\nexpect b2=0"));
    REQUIRE_FALSE(e.ok());
    CHECK(e.failure->code == ErrorCode::ExpectationFailed);
    CHECK(e.failure->message == "b2: expected 0, actual 1");
    CHECK(e.failure->line == 2);
}

TEST_CASE("second construction endpoints")
{
    for (int n = 4; n <= 12; ++n) {
        const ExecutionResult r = execute(thm_b_script(n));
        REQUIRE(r.ok());
        const Invariants end = invariants(r.final_expression);
        if (n % 2) {
            CHECK(r.final_expression.form().to_string() == "[[-4]]");
            CHECK(r.final_expression.pieces().empty());
        } else {
            CHECK(r.final_expression.form().to_string() == "[[-1]]");
            REQUIRE(r.final_expression.pieces().size() == 1);
            CHECK(r.final_expression.pieces().front().kind == "B2");
            CHECK(end.torsion == std::vector<Integer>{2});
        }
        CHECK(end.euler == 2);
        CHECK(end.sigma == -1);
        CHECK(end.b2 == 1);
    }
    CHECK_THROWS_AS((void)thm_b_script(3), Error);
    CHECK_THROWS_AS((void)thm_a_script(1), Error);
}

TEST_CASE("E(m) construction")
{
    for (int n = 2; n <= 8; ++n) {
        const ExecutionResult r = execute(em_script(n, 1));
        REQUIRE(r.ok());
        CHECK_FALSE(r.notes.empty());
        const auto& steps = r.ledger.steps();
        const std::size_t blowups = static_cast<std::size_t>(
            std::count_if(steps.begin(), steps.end(), [](const LedgerStep& s) { return s.move == "blowup"; }));
        CHECK(blowups == static_cast<std::size_t>(n - 1));
        const Invariants& before = steps[steps.size() - 2].invariants;
        const Invariants& after = steps.back().invariants;
        CHECK(before.b2 - after.b2 == n - 1);
        CHECK(after.sigma - before.sigma == n - 1);
    }
}

TEST_CASE("determinism and labels")
{
    const std::string a = execute(thm_b_script(9)).to_json().dump();
    const std::string b = execute(thm_b_script(9)).to_json().dump();
    CHECK(a == b);

    const ExecutionResult r = execute(parse_script("manifold V(-2)\nblowup\nblowup\nblowdown e2\nblowup"));
    REQUIRE(r.ok());
    CHECK(r.final_expression.two_handles() == std::vector<Label>{"s1", "e1", "e3"});
}

TEST_CASE("graph prefix and DOT")
{
    const ExecutionResult r = execute(thm_a_script(4));
    REQUIRE(r.ok());
    CHECK(r.graphs.size() == 4);
    const std::string dot = graph_dot_at(r, 3);
    CHECK(dot.find("\"sigma\" [label=\"-1\"") != std::string::npos);
    CHECK(dot.find("\"s1\" [label=\"-6\"") != std::string::npos);
    CHECK(graph_dot_at(r, 0).find("\"s1\" [label=\"-5\"") != std::string::npos);
    try {
        (void)graph_dot_at(r, 4);
        FAIL("expected StepOutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StepOutOfRange);
        CHECK(std::string(e.what()).find("rbd") != std::string::npos);
    }
}
