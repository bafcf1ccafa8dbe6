#include "kirby/error.hpp"
#include "kirby/handlecalc.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <functional>
#include <random>

using namespace kirby;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidParameter;
}

HandleExpression chain_expression(const std::vector<long long>& framings)
{
    return from_plumbing(build_linear(framings));
}

/// Random expression: dim 2..4 two-handles, 0..2 one-handles.
HandleExpression random_expression(std::mt19937& rng)
{
    std::uniform_int_distribution<int> small(-3, 3);
    std::uniform_int_distribution<int> dim(2, 4);
    std::uniform_int_distribution<int> ones(0, 2);
    HandleExpression h;
    const int k = ones(rng);
    for (int i = 0; i < k; ++i) {
        h.add_one_handle("d" + std::to_string(i + 1));
    }
    const int m = dim(rng);
    for (int i = 0; i < m; ++i) {
        std::vector<Integer> w;
        for (int j = 0; j < k; ++j) {
            w.emplace_back(small(rng));
        }
        h.add_two_handle("x" + std::to_string(i + 1), Rational(small(rng)), w);
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            h.set_linking("x" + std::to_string(i + 1), "x" + std::to_string(j + 1), Rational(small(rng)));
        }
    }
    return h;
}

}  // namespace

TEST_CASE("B_n has the homology of a rational ball with H_1 = Z/n")
{
    for (int n = 2; n <= 50; ++n) {
        const HandleExpression b = bn_expression(n);
        const Homology hom = homology(b);
        CHECK(hom.b1 == 0);
        CHECK(hom.b2 == 0);
        REQUIRE(hom.h1_torsion.has_value());
        CHECK(*hom.h1_torsion == std::vector<Integer>{Integer(n)});
        const EulerSigma es = euler_sigma(b);
        CHECK(es.euler == 1);
        CHECK(es.sigma == 0);
        CHECK(lens_equal(*b.boundary_claim(), LensSpace{Integer(n) * n, Integer(n - 1)}));
        CHECK(is_spin_bn(n) == (n % 2 == 1));
    }
    CHECK(code_of([] { (void)bn_expression(1); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("plumbing expressions")
{
    const HandleExpression c = chain_expression({-5, -2});
    const Invariants inv = invariants(c);
    CHECK(inv.b2 == 2);
    CHECK(inv.sigma == -2);
    CHECK(inv.euler == 3);
    CHECK(inv.det == 9);
    CHECK(inv.torsion == std::vector<Integer>{});
    CHECK(inv.boundary == LensSpace{9, 2});
    CHECK(find_cn_chains(c, 3) == std::vector<std::vector<Label>>{{"s1", "s2"}});
}

TEST_CASE("slides preserve invariants; errors are reported")
{
    const HandleExpression h = chain_expression({-3, -2});
    const HandleExpression s = slide(h, "s2", "s1", 1);
    CHECK(s.form().at(1, 1) == -2 + 2 + -3);
    CHECK(invariants(s) == invariants(h));
    CHECK(code_of([&] { (void)slide(h, "s1", "nope", 1); }) == ErrorCode::UnknownLabel);
    CHECK(code_of([&] { (void)slide(h, "s1", "s1", 1); }) == ErrorCode::IndexError);
}

TEST_CASE("cancelling pairs")
{
    const HandleExpression h = chain_expression({-4});
    const HandleExpression p = add_cancelling_pair(h, std::string("d"), std::string("z"), {{"s1", 1}});
    CHECK(p.one_handle_count() == 1);
    CHECK(invariants(p) == invariants(h));
    const HandleExpression back = remove_cancelling_pair(p, "d", "z");
    CHECK(back.form() == h.form());

    // s1 runs over d after the slide: the pair no longer cancels.
    const HandleExpression q = slide(p, "s1", "z", 1);
    CHECK(code_of([&] { (void)remove_cancelling_pair(q, "d", "z"); }) == ErrorCode::NotCancelling);
    // a handle winding twice is not a cancelling partner
    HandleExpression w = p;
    w.set_winding("z", "d", 2);
    CHECK(code_of([&] { (void)remove_cancelling_pair(w, "d", "z"); }) == ErrorCode::NotCancelling);
    CHECK(code_of([&] { (void)remove_cancelling_pair(p, "nope", "z"); }) == ErrorCode::UnknownLabel);
}

TEST_CASE("blow-ups and blow-downs")
{
    const HandleExpression h = chain_expression({-3, -2});
    const HandleExpression u = blow_up(h, std::string("e"));
    const Invariants a = invariants(h);
    const Invariants b = invariants(u);
    CHECK(b.b2 == a.b2 + 1);
    CHECK(b.sigma == a.sigma - 1);
    CHECK(b.euler == a.euler + 1);
    CHECK(b.det == -a.det);
    CHECK(invariants(blow_down(u, "e")) == a);
    CHECK(code_of([&] { (void)blow_down(h, "s1"); }) == ErrorCode::NotBlowdownable);
    const HandleExpression wound = add_cancelling_pair(blow_up(h, std::string("e")), std::string("d"),
                                                       std::string("z"));
    CHECK(code_of([&] { (void)blow_down(slide(wound, "e", "z", 1), "e"); }) == ErrorCode::NotBlowdownable);

    // blowing down a -1 sphere on a chain raises its neighbours' framings
    const HandleExpression c = chain_expression({-2, -1, -3});
    const HandleExpression d = blow_down(c, "s2");
    CHECK(d.form().to_string() == "[[-1,1],[1,-2]]");
}

TEST_CASE("rational blow-down of a bare C_n is a split B_n")
{
    for (int n = 2; n <= 12; ++n) {
        const HandleExpression c = from_plumbing(build_linear(cn_fraction(n)));
        std::vector<Label> chain = c.two_handles();
        std::sort(chain.begin(), chain.end(), [](const Label& x, const Label& y) {
            return std::stoi(x.substr(1)) < std::stoi(y.substr(1));
        });
        const HandleExpression b = rational_blow_down(c, chain, n);
        const Invariants inv = invariants(b);
        CHECK(inv.b1 == 0);
        CHECK(inv.b2 == 0);
        CHECK(inv.euler == 1);
        CHECK(inv.sigma == 0);
        CHECK(inv.torsion == std::vector<Integer>{Integer(n)});
        CHECK(b.pieces().size() == 1);
        CHECK_FALSE(b.pieces().front().glued);
    }
}

TEST_CASE("rational blow-down preconditions")
{
    const HandleExpression h = chain_expression({-5, -2, -1});
    CHECK(code_of([&] { (void)rational_blow_down(h, {"s2", "s1"}, 3); }) == ErrorCode::ChainMismatch);
    CHECK(code_of([&] { (void)rational_blow_down(h, {"s1"}, 3); }) == ErrorCode::ChainMismatch);
    CHECK(code_of([&] { (void)rational_blow_down(h, {"s1", "s3"}, 3); }) == ErrorCode::ChainMismatch);
    const HandleExpression wound = slide(add_cancelling_pair(h, std::string("d"), std::string("z")), "s2", "z", 1);
    CHECK(code_of([&] { (void)rational_blow_down(wound, {"s1", "s2"}, 3); }) == ErrorCode::WindingObstruction);

    const HandleExpression b = rational_blow_down(h, {"s1", "s2"}, 3, std::string("P"));
    // the -1 sphere meets S_2: its new square is -1 - (C_3^{-1})_{22} = -1 + 5/9
    CHECK(b.form().at(0, 0) == Rational(-4, 9));
    CHECK(b.pieces().front().glued);
    CHECK_FALSE(invariants(b).torsion.has_value());
    CHECK(invariants(b).b2 == 1);
    CHECK(invariants(b).sigma == -1);
}

TEST_CASE("rational blow-up undoes rational blow-down")
{
    const HandleExpression h = chain_expression({-5, -2, -1});
    const HandleExpression b = rational_blow_down(h, {"s1", "s2"}, 3, std::string("P"));
    const HandleExpression u = rational_blow_up(b, "P", {"c1", "c2"}, {ChainCoupling{"s3", 1, Integer(1)}});
    CHECK(u.form().entries() ==
          std::vector<std::vector<Rational>>{{Rational(-1), Rational(0), Rational(1)},
                                             {Rational(0), Rational(-5), Rational(1)},
                                             {Rational(1), Rational(1), Rational(-2)}});
    CHECK(invariants(u).b2 == invariants(h).b2);
    CHECK(invariants(u).sigma == invariants(h).sigma);
    CHECK(code_of([&] { (void)rational_blow_up(b, "Q", {}, {}); }) == ErrorCode::UnknownPiece);
    CHECK(code_of([&] { (void)rational_blow_up(b, "P", {"c1", "c2"}, {}); }) == ErrorCode::InvalidCoupling);
    CHECK(code_of([&] {
              (void)rational_blow_up(b, "P", {"c1", "c2"}, {ChainCoupling{"s3", 0, Integer(1)}});
          }) == ErrorCode::InvalidCoupling);
}

TEST_CASE("seal and unseal are inverse and keep the complement's rational form")
{
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 2 + trial % 5;
        HandleExpression h;
        // a glued piece elsewhere lifts the integrality requirement
        h.add_piece(bn_piece(3, "G", true));
        const int m = 1 + trial % 3;
        std::map<Label, BallCoupling> couplings;
        for (int i = 0; i < m; ++i) {
            const Label y = "y" + std::to_string(i);
            h.add_two_handle(y, Rational(small(rng), 1 + trial % 4));
            couplings[y] = BallCoupling{Integer(small(rng)), Integer(small(rng))};
        }
        couplings["y0"].winding = 1;  // keeps the resealed ball glued, as P is
        h.add_piece(bn_piece(k, "P", true));
        const HandleExpression open = unseal_bn(h, "P", "d", "b", couplings);
        CHECK(open.winding("b", "d") == k);
        CHECK(open.form().at(open.two_index("b"), open.two_index("b")) == k - 1);

        // v_y = e_y - (a_y / k) e_b is orthogonal to b and reproduces the old form
        const auto& f = open.form();
        const std::size_t bi = open.two_index("b");
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const Label yi = "y" + std::to_string(i);
                const Label yj = "y" + std::to_string(j);
                const std::size_t a = open.two_index(yi);
                const std::size_t c = open.two_index(yj);
                const Rational ai(couplings[yi].winding, k);
                const Rational aj(couplings[yj].winding, k);
                const Rational v = f.at(a, c) - aj * f.at(a, bi) - ai * f.at(bi, c) + ai * aj * f.at(bi, bi);
                CHECK(v == h.form().at(h.two_index(yi), h.two_index(yj)));
            }
        }
        const HandleExpression closed = seal_bn(open, "d", "b", std::string("P"));
        CHECK(closed.form() == h.form());
        CHECK(invariants(closed) == invariants(h));
    }
}

TEST_CASE("unseal rejects couplings that leave fractional framings")
{
    HandleExpression h = chain_expression({-1});
    h.add_piece(bn_piece(3, "P", false));
    CHECK(code_of([&] { (void)unseal_bn(h, "P", "d", "b", {{"s1", BallCoupling{1, 0}}}); }) ==
          ErrorCode::InvalidCoupling);
    CHECK(code_of([&] { (void)unseal_bn(h, "Q", "d", "b", {}); }) == ErrorCode::UnknownPiece);
    CHECK(code_of([&] { (void)seal_bn(add_cancelling_pair(h, std::string("d"), std::string("z")), "d", "z"); }) ==
          ErrorCode::InvalidParameter);
}

TEST_CASE("elliptic surface piece")
{
    for (int m = 1; m <= 4; ++m) {
        const Invariants inv = invariants(elliptic_expression(m));
        CHECK(inv.b2 == 12 * m - 2);
        CHECK(inv.sigma == -8 * m);
        CHECK(inv.euler == 12 * m);
        CHECK(inv.b1 == 0);
    }
}

TEST_CASE("random slides and cancelling pairs preserve the invariant tuple")
{
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        HandleExpression h = random_expression(rng);
        const Invariants start = invariants(h);
        const auto labels = h.two_handles();
        std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
        for (int s = 0; s < 4; ++s) {
            const std::size_t i = pick(rng);
            std::size_t j = pick(rng);
            if (i == j) {
                j = (j + 1) % labels.size();
            }
            h = slide(h, labels[i], labels[j], s % 2 ? 1 : -1);
            CHECK(invariants(h) == start);
        }
        HandleExpression p = add_cancelling_pair(h, std::string("dd"), std::string("zz"), {{labels[0], 2}});
        CHECK(invariants(p) == start);
        p = slide(p, labels[1], "zz", 1);
        CHECK(invariants(p) == start);
        p = slide(p, labels[1], "zz", -1);
        CHECK(invariants(remove_cancelling_pair(p, "dd", "zz")) == start);
    }
}

TEST_CASE("ledger JSON")
{
    Ledger ledger;
    HandleExpression h = chain_expression({-5, -2});
    ledger.record("start", {"chain(-5,-2)"}, h);
    h = rational_blow_down(h, {"s1", "s2"}, 3);
    ledger.record("rbd", {"chain", "[s1,s2]", "n=3"}, h);
    const auto j = ledger.to_json();
    REQUIRE(j["steps"].size() == 2);
    const auto& s0 = j["steps"][0];
    std::vector<std::string> keys;
    for (const auto& [k, v] : s0.items()) {
        keys.push_back(k);
    }
    CHECK(keys == std::vector<std::string>{"move", "params", "b1", "b2", "euler", "sigma", "det", "torsion",
                                           "boundary", "pieces"});
    CHECK(s0["det"]["num"] == 9);
    CHECK(s0["boundary"] == "L(9,2)");
    CHECK(j["steps"][1]["torsion"] == nlohmann::ordered_json::array({3}));

    Invariants big;
    big.det = Rational(Integer("123456789012345678901234567891"), Integer(2));
    CHECK(to_json(big)["det"]["num"] == "123456789012345678901234567891");
    CHECK(to_json(big)["torsion"] == "indeterminate");
    CHECK(ledger.to_text().find("rbd") != std::string::npos);
}
