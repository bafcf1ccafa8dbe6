#include "kirby/scriptdsl.hpp"

#include <sstream>

namespace kirby {

namespace {

[[nodiscard]] std::string e(int k) { return "e" + std::to_string(k); }

[[nodiscard]] std::string list(const std::vector<std::string>& items)
{
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? "," : "") + items[i];
    }
    return out + "]";
}

void repeat(std::ostringstream& out, int times, const std::string& line)
{
    for (int i = 0; i < times; ++i) {
        out << line << '\n';
    }
}

/// Blow-ups taking V_{-(n+1)} to C_n with a -1 sphere `sigma` on the last sphere.
/// Returns the chain in order.
std::vector<std::string> thm_a_blowups(std::ostringstream& out, int n)
{
    std::vector<std::string> chain{"s1"};
    std::string prev = "s1";
    for (int k = 1; k <= n - 2; ++k) {
        out << "blowup vertex " << prev << " as " << e(k) << '\n';
        chain.push_back(e(k));
        prev = e(k);
    }
    out << "blowup vertex " << prev << " as sigma\n";
    return chain;
}

/// Blow-ups taking V_{-4} to C_n with `sigma` on the second sphere.
std::vector<std::string> thm_b_blowups(std::ostringstream& out, int n)
{
    out << "blowup vertex s1 as e1\n";
    for (int k = 2; k <= n - 2; ++k) {
        out << "blowup edge s1 " << e(k - 1) << " as " << e(k) << '\n';
    }
    out << "blowup vertex " << e(n - 2) << " as sigma\n";
    std::vector<std::string> chain{"s1"};
    for (int k = n - 2; k >= 1; --k) {
        chain.push_back(e(k));
    }
    return chain;
}

std::string ball(int n) { return "B" + std::to_string(n); }

void thm_a_body(std::ostringstream& out, int n, bool with_expectations)
{
    const auto chain = thm_a_blowups(out, n);
    if (with_expectations) {
        out << "expect chain=" << n << " b2=" << n << " sigma=" << -n << " euler=" << n + 1 << '\n';
    }
    out << "rbd chain " << list(chain) << " n=" << n << " as " << ball(n) << '\n';
    if (with_expectations) {
        out << "expect b2=1 sigma=-1 euler=2 torsion=? pieces=[" << ball(n) << "*]\n";
    }
    out << "unseal " << ball(n) << " as [d,b] couple [sigma=1:1]\n";
    if (with_expectations) {
        out << "expect onehandles=1 handles=2 torsion=[]\n";
    }
    repeat(out, n, "slide b over sigma -");
    out << "cancelpair d sigma\n";
}

void thm_b_body(std::ostringstream& out, int n, bool with_expectations)
{
    const auto chain = thm_b_blowups(out, n);
    if (with_expectations) {
        out << "expect chain=" << n << " b2=" << n << " sigma=" << -n << " euler=" << n + 1 << '\n';
    }
    out << "rbd chain " << list(chain) << " n=" << n << " as " << ball(n) << '\n';
    if (with_expectations) {
        out << "expect b2=1 sigma=-1 euler=2 torsion=?\n";
    }
    out << "unseal " << ball(n) << " as [d,b] couple [sigma=" << n - 2 << ':' << n - 2 << "]\n";
    out << "slide b over sigma -\n";
    if (n % 2 != 0) {
        repeat(out, (n - 3) / 2, "slide sigma over b -");
        repeat(out, 2, "slide b over sigma -");
        out << "cancelpair d sigma\n";
    } else {
        repeat(out, (n - 2) / 2, "slide sigma over b -");
        out << "slide b over sigma +\n";
        out << "seal d b as B2\n";
    }
}

std::vector<std::string> em_blowups(std::ostringstream& out, int n)
{
    auto name = [n](int k) { return k == n - 1 ? std::string("sigma") : e(k); };
    out << "blowup as " << name(1) << '\n';
    repeat(out, 2, "slide f over " + name(1) + " -");
    for (int k = 2; k <= n - 1; ++k) {
        out << "blowup as " << name(k) << '\n';
        out << "slide f over " << name(k) << " -\n";
        out << "slide " << name(k - 1) << " over " << name(k) << " -\n";
    }
    std::vector<std::string> chain{"f"};
    for (int k = 1; k <= n - 2; ++k) {
        chain.push_back(e(k));
    }
    return chain;
}

[[nodiscard]] std::vector<std::string> c_labels(int n)
{
    std::vector<std::string> c;
    for (int k = 1; k <= n - 1; ++k) {
        c.push_back("c" + std::to_string(k));
    }
    return c;
}

}  // namespace

MoveScript thm_a_script(int n)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "thm_a_script needs n >= 2, got " + std::to_string(n));
    }
    std::ostringstream out;
    out << "manifold V(" << -(n + 1) << ")\n";
    out << "expect b2=1 sigma=-1 euler=2 boundary=L(" << n + 1 << ",1)\n";
    thm_a_body(out, n, true);
    out << "expect form=[[" << -(n + 1) << "]] pieces=[] torsion=[] b2=1 sigma=-1 euler=2 det=" << -(n + 1)
        << " boundary=L(" << n + 1 << ",1)\n";
    return parse_script(out.str());
}

MoveScript thm_a_prefix_to_rbd(int n)
{
    if (n < 2) {
        throw Error(ErrorCode::InvalidParameter, "thm_a_prefix_to_rbd needs n >= 2, got " + std::to_string(n));
    }
    std::ostringstream out;
    out << "manifold V(" << -(n + 1) << ")\n";
    const auto chain = thm_a_blowups(out, n);
    out << "rbd chain " << list(chain) << " n=" << n << " as " << ball(n) << '\n';
    return parse_script(out.str());
}

MoveScript thm_b_script(int n)
{
    if (n < 4) {
        throw Error(ErrorCode::InvalidParameter, "thm_b_script needs n >= 4, got " + std::to_string(n));
    }
    std::ostringstream out;
    out << "manifold V(-4)\n";
    out << "expect b2=1 sigma=-1 euler=2 boundary=L(4,1)\n";
    thm_b_body(out, n, true);
    if (n % 2 != 0) {
        out << "expect form=[[-4]] pieces=[] torsion=[] b2=1 sigma=-1 euler=2 det=-4 boundary=L(4,1)\n";
    } else {
        out << "expect form=[[-1]] pieces=[B2] torsion=[2] b2=1 sigma=-1 euler=2 boundary=L(4,1)\n";
    }
    return parse_script(out.str());
}

MoveScript em_script(int n, int m)
{
    if (n < 2 || m < 1) {
        throw Error(ErrorCode::InvalidParameter,
                    "em_script needs n >= 2 and m >= 1, got n=" + std::to_string(n) + " m=" + std::to_string(m));
    }
    const long long b2 = 12LL * m - 2;
    const long long sigma = -8LL * m;
    std::ostringstream out;
    out << "manifold E(" << m << ")\n";
    out << "#! E(" << m << ") enters as external data: b2=" << b2 << ", sigma=" << sigma << ", euler=" << b2 + 2
        << "\n";
    out << "#! linking of the auxiliary -1 spheres (sigma meets the first and last chain spheres) is read off a "
           "diagram, not derived\n";
    out << "expect b2=" << b2 << " sigma=" << sigma << " euler=" << b2 + 2 << '\n';
    const auto chain = em_blowups(out, n);
    out << "expect chain=" << n << " b2=" << b2 + n - 1 << " sigma=" << sigma - (n - 1) << " euler=" << b2 + 2 + n - 1
        << '\n';
    out << "rbd chain " << list(chain) << " n=" << n << " as " << ball(n) << '\n';
    out << "expect b2=" << b2 << " sigma=" << sigma << " euler=" << b2 + 2 << " torsion=? pieces=[E(" << m << "),"
        << ball(n) << "*]\n";
    return parse_script(out.str());
}

SimpleCaseScripts simple_case(SimpleCase c, int n, int m)
{
    SimpleCaseScripts s;
    std::ostringstream up;
    std::ostringstream down;
    up << "manifold start\n";
    down << "manifold start\n";
    const auto chain = c_labels(n);
    switch (c) {
    case SimpleCase::A: {
        if (n < 2) {
            throw Error(ErrorCode::InvalidParameter, "case A needs n >= 2");
        }
        s.start = construct_start("V(" + std::to_string(-(n + 1)) + ")");
        up << "uncancelpair d z link [s1=1]\n";
        repeat(up, n, "slide s1 over z +");
        up << "seal d s1 as " << ball(n) << '\n';
        up << "rbu " << ball(n) << " chain " << list(chain) << " couple [z." << chain.back() << "=1]\n";
        up << "blowdown z\n";
        for (int k = n - 1; k >= 2; --k) {
            up << "blowdown c" << k << '\n';
        }
        thm_a_body(down, n, false);
        break;
    }
    case SimpleCase::B: {
        if (n < 3 || n % 2 == 0) {
            throw Error(ErrorCode::InvalidParameter, "case B needs odd n >= 3");
        }
        s.start = construct_start("V(-4)");
        up << "uncancelpair d z link [s1=1]\n";
        repeat(up, 2, "slide s1 over z +");
        repeat(up, (n - 3) / 2, "slide z over s1 +");
        up << "slide s1 over z +\n";
        up << "seal d s1 as " << ball(n) << '\n';
        up << "rbu " << ball(n) << " chain " << list(chain) << " couple [z.c2=1]\n";
        up << "blowdown z\n";
        for (int k = 2; k <= n - 1; ++k) {
            up << "blowdown c" << k << '\n';
        }
        thm_b_body(down, n, false);
        break;
    }
    case SimpleCase::Em: {
        const ExecutionResult r = execute(em_script(n, m));
        if (!r.ok()) {
            throw Error(ErrorCode::MoveRejected, "E(m)_n construction failed: " + r.failure->message);
        }
        s.start = r.final_expression;
        s.expected_simple = false;
        if (n == 2) {
            up << "rbu " << ball(n) << " chain " << list(chain) << " couple [sigma.c1=2]\n";
        } else {
            up << "rbu " << ball(n) << " chain " << list(chain) << " couple [sigma.c1=1,sigma." << chain.back()
               << "=1]\n";
        }
        up << "blowdown sigma\n";
        for (int k = n - 1; k >= 2; --k) {
            up << "blowdown c" << k << '\n';
        }
        std::vector<std::string> fresh;
        for (int k = 1; k <= n - 1; ++k) {
            fresh.push_back("x" + std::to_string(k));
            down << "blowup as x" << k << '\n';
        }
        down << "rbd chain " << list(fresh) << " n=" << n << '\n';
        break;
    }
    }
    s.up = parse_script(up.str());
    s.down = parse_script(down.str());
    return s;
}

}  // namespace kirby
