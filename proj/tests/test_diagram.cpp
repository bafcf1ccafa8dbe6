#include "kirby/error.hpp"
#include "kirby/scriptdsl.hpp"

#include <doctest.h>

using namespace kirby;

TEST_CASE("first diagram: V_{-n-1} embeddings are simple")
{
    for (int n = 2; n <= 12; ++n) {
        const SimpleCaseScripts s = simple_case(SimpleCase::A, n);
        const DiagramReport r = check_simple_diagram(s.start, s.up, s.down, n);
        CHECK_MESSAGE(r.verdict, "n=" << n);
        CHECK(r.mismatches.empty());
        // the up path passes through V_{-n-1} # (n-1) CP^2-bar
        bool seen = false;
        for (const auto& st : r.path_up.steps()) {
            if (st.move == "rbu") {
                seen = st.invariants.b2 == n && st.invariants.sigma == -n && st.invariants.euler == n + 1;
            }
        }
        CHECK(seen);
        // argument order does not matter
        CHECK(check_simple_diagram(s.start, s.down, s.up, n).verdict);
    }
}

TEST_CASE("second diagram: odd n into V_{-4} is simple")
{
    for (int n = 3; n <= 15; n += 2) {
        const SimpleCaseScripts s = simple_case(SimpleCase::B, n);
        CHECK_MESSAGE(check_simple_diagram(s.start, s.up, s.down, n).verdict, "n=" << n);
    }
}

TEST_CASE("E(m)_n is not simple, with a piece mismatch")
{
    for (int n = 2; n <= 7; ++n) {
        const SimpleCaseScripts s = simple_case(SimpleCase::Em, n);
        CHECK_FALSE(s.expected_simple);
        const DiagramReport r = check_simple_diagram(s.start, s.up, s.down, n);
        CHECK_FALSE(r.verdict);
        bool piece_mismatch = false;
        for (const auto& m : r.mismatches) {
            piece_mismatch = piece_mismatch || m.rfind("up pieces", 0) == 0;
        }
        CHECK(piece_mismatch);
        // homological invariants agree: only the piece list tells them apart
        const Invariants a = invariants(s.start);
        REQUIRE(r.path_up.steps().size() >= 2);
        const Invariants& b = r.path_up.steps().back().invariants;
        CHECK(a.b2 == b.b2);
        CHECK(a.sigma == b.sigma);
        CHECK(a.euler == b.euler);
    }
}

TEST_CASE("verdicts are stable under relabeling")
{
    SimpleCaseScripts s = simple_case(SimpleCase::A, 5);
    HandleExpression renamed = s.start;
    renamed.relabel("s1", "s1");  // no-op
    CHECK(check_simple_diagram(renamed, s.up, s.down, 5).verdict);

    // rename the start handle and every script reference to it
    auto rename = [](MoveScript m) {
        for (auto& st : m.statements) {
            for (auto& a : st.args) {
                std::string out;
                std::size_t pos = 0;
                while (true) {
                    const auto at = a.find("s1", pos);
                    if (at == std::string::npos) {
                        out += a.substr(pos);
                        break;
                    }
                    out += a.substr(pos, at - pos) + "q7";
                    pos = at + 2;
                }
                a = out;
            }
        }
        return m;
    };
    HandleExpression start = s.start;
    start.relabel("s1", "q7");
    CHECK(check_simple_diagram(start, rename(s.up), rename(s.down), 5).verdict);
}

TEST_CASE("malformed paths")
{
    const SimpleCaseScripts s = simple_case(SimpleCase::A, 4);
    auto code = [&](const MoveScript& a, const MoveScript& b, int n) {
        try {
            (void)check_simple_diagram(s.start, a, b, n);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidParameter;
    };
    CHECK(code(s.up, s.up, 4) == ErrorCode::MalformedPath);
    CHECK(code(s.up, s.down, 5) == ErrorCode::MalformedPath);
    CHECK(code(parse_script("manifold start\nblowup\nrbu B4\nblowdown e1\nblowdown e1"), s.down, 4) ==
          ErrorCode::MalformedPath);
}
