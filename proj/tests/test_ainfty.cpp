#include "doctest.h"

#include "oracles.hpp"

using namespace ainf;
using namespace testutil;

namespace {

// codiscrete category: every hom space is the algebra, every composition
// tensor the algebra's
CurvedCategory category_from_algebra(const CurvedAlgebra& a, int objects) {
    std::vector<std::string> names;
    for (int i = 0; i < objects; ++i) names.push_back("X" + std::to_string(i));
    CurvedCategory c(a.cone(), a.trunc_order(), names, a.max_arity());
    for (int i = 0; i < objects; ++i)
        for (int j = 0; j < objects; ++j) c.set_hom_basis(i, j, a.basis());
    std::vector<int> chain;
    std::function<void(int)> rec = [&](int remaining) {
        if (remaining == 0) {
            int k = static_cast<int>(chain.size()) - 1;
            if (k >= 0 && k <= a.max_arity()) {
                for (const auto& [tuple, col] : a.ops(k))
                    for (const auto& [idx, s] : col) c.set_op(chain, tuple, idx, s);
            }
            return;
        }
        for (int o = 0; o < objects; ++o) {
            chain.push_back(o);
            rec(remaining - 1);
            chain.pop_back();
        }
    };
    for (int len = 1; len <= a.max_arity() + 1; ++len) rec(len);
    return c;
}

}  // namespace

TEST_CASE("relation checker accepts the basic fixtures") {
    auto z2 = cone_z2();
    CHECK(check_curved_ainfty(fixture_unit_ring(z2, 4), 5).ok());
    CHECK(check_curved_ainfty(fixture_f1(z2, 4, 3), 5).ok());
    CHECK(check_curved_ainfty(fixture_f5(z2, 4), 5).ok());
    CHECK(check_curved_ainfty(fixture_f6(z2, 4, 2), 5).ok());
    CHECK(check_curved_ainfty(fixture_curved_pair(z2, 4, 2, lv({1, 0})), 5).ok());
}

TEST_CASE("relation checker flags a non-associative product") {
    auto report = check_curved_ainfty(fixture_nonassociative(cone_z2(), 4), 5);
    CHECK_FALSE(report.ok());
    bool arity3 = false;
    for (const auto& v : report.violations) arity3 |= (v.arity == 3);
    CHECK(arity3);
}

TEST_CASE("degree rule and curvature filtration are enforced") {
    auto z2 = cone_z2();
    CurvedAlgebra a(z2, 4, {{"x", 0}, {"y", 1}}, 3);
    // output parity must be inputs + arity
    CHECK_THROWS_AS(a.set_op(1, {0}, 0, PowerSeries::constant(z2, 4, 1)), InvariantError);
    // curvature needs valuation >= 1
    CHECK_THROWS_AS(a.set_op(0, {}, 0, PowerSeries::constant(z2, 4, 1)), InvariantError);
    a.set_op(0, {}, 0, PowerSeries::monomial(z2, 4, lv({1, 0})));  // fine
}

TEST_CASE("level-0 reduction") {
    auto z2 = cone_z2();
    SUBCASE("curvature reduces to zero") {
        auto a = fixture_curved_pair(z2, 4, 2, lv({1, 0}));
        auto g = gr0(a);
        CHECK(g.curvature().is_zero());
        CHECK(check_curved_ainfty(g, 5).ok());
    }
    SUBCASE("all coefficients in the ideal give the zero multiplication") {
        CurvedAlgebra a(z2, 4, {{"x", 0}}, 3);
        a.set_op(2, {0, 0}, 0, PowerSeries::monomial(z2, 4, lv({1, 0})));
        auto g = gr0(a);
        CHECK(g.ops(2).empty());
    }
    SUBCASE("reduction equals the termwise constant part") {
        auto a = fixture_f6(z2, 4, 2);
        // perturb a coefficient by an ideal term; the reduction must not see it
        a.set_op(2, {1, 1}, 3, PowerSeries::monomial(z2, 4, lv({0, 1}), 5));
        auto g = gr0(a);
        for (int k = 1; k <= a.max_arity(); ++k) {
            for (const auto& [tuple, col] : a.ops(k)) {
                for (const auto& [idx, s] : col) {
                    Int expect = s.constant_term();
                    auto it = g.ops(k).find(tuple);
                    Int got = 0;
                    if (it != g.ops(k).end()) {
                        auto jt = it->second.find(idx);
                        if (jt != it->second.end()) got = jt->second.constant_term();
                    }
                    CHECK(got == expect);
                }
            }
        }
    }
}

TEST_CASE("maurer-cartan checking") {
    auto z2 = cone_z2();
    SUBCASE("zero element in an uncurved algebra") {
        auto a = fixture_f5(z2, 4);
        CHECK(check_mc(a, a.zero_element(1)));
    }
    SUBCASE("square-zero closed element of positive valuation") {
        auto a = fixture_f6(z2, 4, 3);
        Element x = a.zero_element(1);
        x.add_coeff(1, PowerSeries::monomial(z2, 4, lv({1, 0})));
        x.add_coeff(2, PowerSeries::monomial(z2, 4, lv({1, 0})));
        CHECK(check_mc(a, x));
    }
    SUBCASE("curved algebra rejects zero") {
        auto a = fixture_curved_pair(z2, 4, 2, lv({1, 0}));
        CHECK_FALSE(check_mc(a, a.zero_element(1)));
    }
    SUBCASE("preconditions") {
        auto a = fixture_f5(z2, 4);
        CHECK_THROWS_AS(check_mc(a, a.zero_element(0)), InvariantError);
        Element bad = a.zero_element(1);
        bad.add_coeff(1, PowerSeries::constant(z2, 4, 1));  // valuation 0
        CHECK_THROWS_AS(check_mc(a, bad), InvariantError);
    }
}

TEST_CASE("deformation by maurer-cartan elements") {
    auto z2 = cone_z2();
    auto a = fixture_f6(z2, 4, 2);
    Element x = a.zero_element(1);
    x.add_coeff(1, PowerSeries::monomial(z2, 4, lv({1, 0})));
    x.add_coeff(2, PowerSeries::monomial(z2, 4, lv({1, 0})));
    REQUIRE(check_mc(a, x));

    SUBCASE("zero deformation is the identity") {
        auto d = deform(a, a.zero_element(1));
        for (int k = 0; k <= a.max_arity(); ++k) CHECK(d.ops(k) == a.ops(k));
    }
    SUBCASE("maurer-cartan deformation is uncurved and passes the relations") {
        auto d = deform(a, x);
        CHECK(d.curvature().is_zero());
        CHECK(check_curved_ainfty(d, 5).ok());
    }
    SUBCASE("non-solution produces curvature equal to its defect") {
        Element y = a.zero_element(1);
        y.add_coeff(1, PowerSeries::monomial(z2, 4, lv({0, 1})));  // u only: y^2 = 2w T^(0,2)
        auto d = deform(a, y);
        CHECK(d.curvature() == mc_defect(a, y));
        CHECK(check_curved_ainfty(d, 5).ok());  // still a curved algebra
    }
    SUBCASE("stacked deformations compose additively") {
        Element y = a.zero_element(1);
        y.add_coeff(1, PowerSeries::monomial(z2, 4, lv({0, 1})));
        y.add_coeff(2, PowerSeries::monomial(z2, 4, lv({0, 1})));
        REQUIRE(check_mc(a, y));
        Element sum = x + y;
        REQUIRE(check_mc(a, sum));
        auto lhs = deform(deform(a, x), y);
        auto rhs = deform(a, sum);
        for (int k = 0; k <= a.max_arity(); ++k) CHECK(lhs.ops(k) == rhs.ops(k));
    }
}

TEST_CASE("cohomological unit verification") {
    auto z2 = cone_z2();
    SUBCASE("unit of a unital ring") {
        auto a = fixture_unit_ring(z2, 4);
        Element e = a.zero_element(0);
        e.add_coeff(0, PowerSeries::constant(z2, 4, 1));
        CHECK(verify_cunit(a, e));
    }
    SUBCASE("zero multiplication of positive rank has no unit") {
        CurvedAlgebra a(z2, 4, {{"x", 0}, {"y", 1}}, 3);
        Element e = a.zero_element(0);
        e.add_coeff(0, PowerSeries::constant(z2, 4, 1));
        CHECK_FALSE(verify_cunit(a, e));
        CHECK_FALSE(verify_cunit(a, a.zero_element(0)));
    }
    SUBCASE("unit survives an acyclic summand and boundary perturbation") {
        auto a = fixture_f5(z2, 4);  // d(u) = w kills the extra classes
        Element e = a.zero_element(0);
        e.add_coeff(0, PowerSeries::constant(z2, 4, 1));
        CHECK(verify_cunit(a, e));
        Element e2 = e;
        e2.add_coeff(2, PowerSeries::constant(z2, 4, 3));  // + exact 3w
        CHECK(verify_cunit(a, e2));
    }
    SUBCASE("doubled unit is not a unit") {
        auto a = fixture_unit_ring(z2, 4);
        Element e = a.zero_element(0);
        e.add_coeff(0, PowerSeries::constant(z2, 4, 2));
        CHECK_FALSE(verify_cunit(a, e));
    }
}

TEST_CASE("pushforward along functor data") {
    auto z2 = cone_z2();
    auto a = fixture_f6(z2, 4, 2);
    Element x = a.zero_element(1);
    x.add_coeff(1, PowerSeries::monomial(z2, 4, lv({1, 0})));
    x.add_coeff(2, PowerSeries::monomial(z2, 4, lv({1, 0})));
    REQUIRE(check_mc(a, x));

    SUBCASE("identity functor") {
        FunctorData g(a, a, 3);
        for (int i = 0; i < a.rank(); ++i)
            g.set_comp(1, {i}, i, PowerSeries::constant(z2, 4, 1));
        CHECK(pushforward_mc(g, x) == x);
    }
    SUBCASE("strict sign flip preserves the equation") {
        FunctorData g(a, a, 3);
        // u -> u, v -> -v, e -> e, w -> w is a strict isomorphism here
        g.set_comp(1, {0}, 0, PowerSeries::constant(z2, 4, 1));
        g.set_comp(1, {1}, 1, PowerSeries::constant(z2, 4, 1));
        g.set_comp(1, {2}, 2, PowerSeries::constant(z2, 4, -1));
        g.set_comp(1, {3}, 3, PowerSeries::constant(z2, 4, 1));
        Element y = pushforward_mc(g, x);
        CHECK(check_mc(a, y));
    }
    SUBCASE("curvature component appears for x = 0") {
        FunctorData g(a, a, 3);
        PowerSeries t = PowerSeries::monomial(z2, 4, lv({1, 1}));
        g.set_comp(0, {}, 1, t);
        Element out = pushforward_mc(g, a.zero_element(1));
        CHECK(out.coeff(1) == t);
        CHECK(out.valuation() >= 1);
    }
    SUBCASE("valuation-0 curvature component rejected") {
        FunctorData g(a, a, 3);
        CHECK_THROWS_AS(g.set_comp(0, {}, 1, PowerSeries::constant(z2, 4, 1)), InvariantError);
    }
}

TEST_CASE("curved categories and bounding-cochain structure maps") {
    auto z2 = cone_z2();
    auto a = fixture_f6(z2, 4, 2);

    SUBCASE("one-object category reduces to the algebra deformation") {
        auto c = category_from_algebra(a, 1);
        CHECK(c.check_relations(4).ok());
        Element x = a.zero_element(1);
        x.add_coeff(1, PowerSeries::monomial(z2, 4, lv({1, 0})));
        x.add_coeff(2, PowerSeries::monomial(z2, 4, lv({1, 0})));
        auto bc = bc_structure_maps(c, {x});
        auto endo = bc.endomorphism_algebra(0);
        auto expect = deform(a, x);
        for (int k = 0; k <= a.max_arity(); ++k) CHECK(endo.ops(k) == expect.ops(k));
    }
    SUBCASE("zero assignment on an uncurved category changes nothing") {
        auto c = category_from_algebra(fixture_f5(z2, 4), 2);
        CHECK(c.check_relations(3).ok());
        auto algebra = fixture_f5(z2, 4);
        auto bc = bc_structure_maps(c, {algebra.zero_element(1), algebra.zero_element(1)});
        CHECK(bc.ops() == c.ops());
    }
    SUBCASE("two-object deformation passes the uncurved relation check") {
        auto c = category_from_algebra(a, 2);
        Element x = a.zero_element(1);
        x.add_coeff(1, PowerSeries::monomial(z2, 4, lv({1, 0})));
        x.add_coeff(2, PowerSeries::monomial(z2, 4, lv({1, 0})));
        Element y = a.zero_element(1);
        y.add_coeff(1, PowerSeries::monomial(z2, 4, lv({0, 1}), 2));
        y.add_coeff(2, PowerSeries::monomial(z2, 4, lv({0, 1}), 2));
        auto bc = bc_structure_maps(c, {x, y});
        CHECK(bc.check_relations(4).ok());
    }
    SUBCASE("failing assignment is rejected") {
        auto c = category_from_algebra(a, 1);
        Element bad = a.zero_element(1);
        bad.add_coeff(1, PowerSeries::monomial(z2, 4, lv({1, 0})));  // u alone: defect 2w T^2
        CHECK_THROWS_AS(bc_structure_maps(c, {bad}), InvariantError);
    }
}

TEST_CASE("closure: deformations of passing inputs pass") {
    std::mt19937_64 rng(5150);
    auto z2 = cone_z2();
    for (int trial = 0; trial < 12; ++trial) {
        CurvedAlgebra base = [&]() {
            switch (trial % 4) {
                case 0: return fixture_f1(z2, 3, Int(trial % 5 - 2));
                case 1: return fixture_f5(z2, 3);
                case 2: return fixture_f6(z2, 3, Int(1 + trial % 3));
                default: return fixture_unit_ring(z2, 3);
            }
        }();
        Element g = random_odd_element(base, rng);
        auto d = deform(base, g);
        CHECK(check_curved_ainfty(d, 5).ok());
        // level-0 reduction of a passing algebra passes
        CHECK(check_curved_ainfty(gr0(d), 5).ok());
    }
}

TEST_CASE("rank-0 algebras pass vacuously") {
    CurvedAlgebra a(cone_z2(), 3, {}, 4);
    CHECK(check_curved_ainfty(a, 4).ok());
    CHECK(check_mc(a, a.zero_element(1)));
    CHECK(gr0(a).rank() == 0);
}
