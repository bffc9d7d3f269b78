// Acceptance suite: one pass/fail line per criterion, all checks exact.
// Expected values come from independent oracles computed here, never from
// the code paths under test.

#include "oracles.hpp"

#include "ainfcalc/dmstrata.hpp"
#include "ainfcalc/io.hpp"
#include "ainfcalc/moduli.hpp"
#include "ainfcalc/transfer.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <unistd.h>

using namespace ainf;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

int criteria_failed = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++criteria_failed;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- 1

void criterion_ring_laws() {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    long long checked = 0;
    std::mt19937_64 rng(20260808);
    for (auto cone : {cone_z2(), cone_slanted(), cone_rank3()}) {
        for (int trial = 0; trial < 1000 && ok; ++trial) {
            auto a = random_series(cone, 6, rng);
            auto b = random_series(cone, 6, rng);
            auto c = random_series(cone, 6, rng);
            ok = ok && ((a + b) + c == a + (b + c));
            ok = ok && (a + b == b + a);
            ok = ok && ((a * b) * c == a * (b * c));
            ok = ok && (a * b == b * a);
            ok = ok && (a * (b + c) == a * b + a * c);
            ++checked;
        }
    }
    double dt = seconds_since(start);
    report(1, "series ring laws, 1000 seeded triples per cone, order 6", ok && dt < 10.0,
           std::to_string(checked) + " triples in " + std::to_string(dt) + "s");
}

// ---------------------------------------------------------------- 2

void criterion_ord_oracle() {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    long long checked = 0;
    for (auto cone : {cone_z2(), cone_slanted(), cone_rank3()}) {
        auto gens = cone_gens(*cone);
        std::map<std::vector<Coord>, int> memo;
        const int d = cone->ambient_dim();
        std::vector<Coord> cur(static_cast<size_t>(d), -4);
        while (true) {
            if (oracle_member(gens, cur)) {
                LatticeVec alpha = to_lattice_vec(cur);
                if (cone->ord(alpha) != oracle_ord(gens, cur, memo)) ok = false;
                ++checked;
            }
            int p = d - 1;
            while (p >= 0 && cur[static_cast<size_t>(p)] == 4) {
                cur[static_cast<size_t>(p)] = -4;
                --p;
            }
            if (p < 0) break;
            ++cur[static_cast<size_t>(p)];
        }
    }
    double dt = seconds_since(start);
    report(2, "adic order vs decomposition oracle, coordinates up to 4", ok && dt < 10.0,
           std::to_string(checked) + " lattice points in " + std::to_string(dt) + "s");
}

// ---------------------------------------------------------------- 3

void criterion_novikov() {
    bool ok = true;
    std::mt19937_64 rng(3);
    struct Setup {
        ConePtr cone;
        std::vector<Rat> kappa;
    };
    std::vector<Setup> setups = {{cone_z2(), {Rat(1), Rat(1)}},
                                 {cone_slanted(), {Rat(1), Rat(1, 2)}},
                                 {cone_rank3(), {Rat(1), Rat(1), Rat(1)}}};
    long long pairs = 0;
    for (const auto& setup : setups) {
        Rat scale = novikov_scale(*setup.cone, setup.kappa);
        for (int trial = 0; trial < 170 && ok; ++trial) {
            auto x = random_series(setup.cone, 5, rng);
            auto y = random_series(setup.cone, 5, rng);
            auto lhs = novikov_specialize(x * y, setup.kappa);
            auto rhs = novikov_specialize(x, setup.kappa) * novikov_specialize(y, setup.kappa);
            if (!(lhs == rhs)) ok = false;
            int val = x.valuation();
            auto nx = novikov_specialize(x, setup.kappa);
            if (val != kValuationInfinity && !nx.is_zero() &&
                *nx.min_exponent() < scale * Rat(val))
                ok = false;
            ++pairs;
        }
    }
    report(3, "specialization is a filtered ring homomorphism", ok && pairs >= 500,
           std::to_string(pairs) + " seeded pairs");
}

// ---------------------------------------------------------------- 4

void criterion_relation_closure() {
    bool ok = true;
    auto z2 = cone_z2();

    // fixed fixtures
    ok = ok && check_curved_ainfty(fixture_unit_ring(z2, 4), 5).ok();
    ok = ok && check_curved_ainfty(fixture_f5(z2, 4), 5).ok();
    for (auto base : {fixture_unit_ring(z2, 4), fixture_f5(z2, 4), fixture_f6(z2, 4, 2)}) {
        TriangleAlgebra t(base, base, diagonal_bimodule(base));
        ok = ok && check_curved_ainfty(t.algebra(), 5).ok();
    }

    // seeded deformations and bounding-cochain categories
    std::mt19937_64 rng(44);
    int cases = 0;
    for (int trial = 0; trial < 30 && ok; ++trial) {
        CurvedAlgebra base = [&]() {
            switch (trial % 4) {
                case 0: return fixture_f1(z2, 4, Int(trial % 7 - 3));
                case 1: return fixture_f5(z2, 4);
                case 2: return fixture_f6(z2, 4, Int(1 + trial % 3));
                default: return fixture_unit_ring(z2, 4);
            }
        }();
        Element g = random_odd_element(base, rng);
        auto d = deform(base, g);
        if (!check_curved_ainfty(d, 5).ok()) ok = false;
        if (!check_curved_ainfty(gr0(d), 5).ok()) ok = false;
        ++cases;
    }
    for (int trial = 0; trial < 20 && ok; ++trial) {
        auto base = fixture_f6(z2, 4, Int(1 + trial % 4));
        std::vector<std::string> names{"X", "Y"};
        CurvedCategory cat(z2, 4, names, base.max_arity());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) cat.set_hom_basis(i, j, base.basis());
        std::function<void(std::vector<int>&, int)> fill = [&](std::vector<int>& chain, int len) {
            if (static_cast<int>(chain.size()) == len) {
                int k = len - 1;
                if (k >= 0 && k <= base.max_arity())
                    for (const auto& [tuple, col] : base.ops(k))
                        for (const auto& [idx, s] : col) cat.set_op(chain, tuple, idx, s);
                return;
            }
            for (int o = 0; o < 2; ++o) {
                chain.push_back(o);
                fill(chain, len);
                chain.pop_back();
            }
        };
        for (int len = 1; len <= base.max_arity() + 1; ++len) {
            std::vector<int> chain;
            fill(chain, len);
        }
        std::uniform_int_distribution<int> coeff(-2, 2);
        auto mc_elem = [&]() {
            Element x = base.zero_element(1);
            Int c = coeff(rng);
            x.add_coeff(1, PowerSeries::monomial(z2, 4, lv({1, 0}), c));
            x.add_coeff(2, PowerSeries::monomial(z2, 4, lv({1, 0}), c));
            return x;
        };
        auto bc = bc_structure_maps(cat, {mc_elem(), mc_elem()});
        if (!bc.check_relations(4).ok()) ok = false;
        ++cases;
    }
    report(4, "relation closure of fixtures, deformations, and bc categories", ok && cases == 50,
           std::to_string(cases) + " seeded cases");
}

// ---------------------------------------------------------------- 5

// independent defect evaluator: raw tensor iteration, no library mu()
bool independent_defect_vanishes(const CurvedAlgebra& tot, const Element& t) {
    std::vector<PowerSeries> acc(static_cast<size_t>(tot.rank()),
                                 PowerSeries::zero(tot.cone(), tot.trunc_order()));
    for (int k = 0; k <= tot.max_arity(); ++k) {
        for (const auto& [tuple, col] : tot.ops(k)) {
            PowerSeries factor = PowerSeries::constant(tot.cone(), tot.trunc_order(), 1);
            bool dead = false;
            for (int p = 0; p < k && !dead; ++p) {
                const PowerSeries& c = t.coeff(tuple[static_cast<size_t>(p)]);
                if (c.is_zero()) dead = true;
                else factor *= c;
            }
            if (dead) continue;
            for (const auto& [idx, s] : col) acc[static_cast<size_t>(idx)] += s * factor;
        }
    }
    for (const auto& s : acc)
        if (!s.is_zero()) return false;
    return true;
}

void criterion_transfer() {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    int solved = 0;
    std::mt19937_64 rng(555);

    auto run_problem = [&](const CurvedAlgebra& a, const CurvedAlgebra& b_alg, const Bimodule& m,
                           const Element& m0, const Element& b, int order) {
        TriangleAlgebra t(a, b_alg, m);
        TransferOptions opt;
        opt.order = order;
        TransferResult r = transfer_mc(t, m0, b, opt);
        // independent substitution through raw tensors
        Element tv = t.embed_a(r.a) + t.embed_m(r.m) + t.embed_b(b);
        if (!independent_defect_vanishes(t.algebra(), tv)) return false;
        // leading orders
        if (!r.a.is_zero() && r.a.valuation() < 1) return false;
        Element dm = r.m - m0;
        if (!dm.is_zero() && dm.valuation() < 1) return false;
        return true;
    };

    for (auto cone : {cone_z2(), cone_slanted()}) {
        for (int trial = 0; trial < 8 && ok; ++trial) {
            CurvedAlgebra base = [&]() {
                switch (trial % 3) {
                    case 0: return fixture_f5(cone, 4);
                    case 1: return fixture_f6(cone, 4, Int(1 + trial % 4));
                    default: return fixture_f1(cone, 4, Int(trial % 5 - 2));
                }
            }();
            Element g = random_odd_element(base, rng);
            auto prob = make_twisted_diagonal_problem(base, g, 0);
            if (!run_problem(prob.a, prob.b, prob.m, prob.m0, prob.b_elem, 4)) ok = false;
            ++solved;
        }
    }
    // column problems: curvature T^beta d(u), right-hand side the integers
    for (auto cone : {cone_z2(), cone_slanted()}) {
        DgaTable f5;
        f5.basis = {{"e", 0}, {"u", 1}, {"w", 0}};
        add_unit_row(f5, 0);
        f5.diff[1] = {{2, 1}};
        CurvedAlgebra c = make_dga(cone, 5, f5);
        for (Coord b1 = 1; b1 <= 2 && ok; ++b1) {
            Element g = c.zero_element(1);
            LatticeVec beta = cone->zero();
            beta[0] = b1;
            g.add_coeff(1, PowerSeries::monomial(cone, 5, beta, 1));
            auto prob = make_column_problem(cone, 5, f5, 0, &g);
            if (!run_problem(prob.a, prob.b, prob.m, prob.m0, prob.b_elem, 5)) ok = false;
            ++solved;
        }
    }
    // nonzero right-hand solutions on the twisted diagonal
    {
        auto z2 = cone_z2();
        for (int trial = 0; trial < 2 && ok; ++trial) {
            auto base = fixture_f6(z2, 4, 2);
            Element b = base.zero_element(1);
            b.add_coeff(1, PowerSeries::monomial(z2, 4, lv({0, 1}), 1 + trial));
            b.add_coeff(2, PowerSeries::monomial(z2, 4, lv({0, 1}), 1 + trial));
            Element g = random_odd_element(base, rng);
            auto prob = make_twisted_diagonal_problem(base, g, 0);
            if (!run_problem(prob.a, prob.b, prob.m, prob.m0, b, 4)) ok = false;
            ++solved;
        }
    }
    // trivial diagonal problems
    for (auto cone : {cone_z2(), cone_slanted()}) {
        auto ring = fixture_unit_ring(cone, 4);
        Bimodule diag = diagonal_bimodule(ring);
        Element m0 = diag.zero_element(0);
        m0.add_coeff(0, PowerSeries::constant(cone, 4, 1));
        if (!run_problem(ring, ring, diag, m0, ring.zero_element(1), 4)) ok = false;
        ++solved;
    }

    // obstructed problems must halt with exit code 3 through the front end
    fs::path tmp = fs::temp_directory_path() / ("ainfcalc_acc_" + std::to_string(::getpid()));
    fs::create_directories(tmp);
    int halted = 0;
    for (Int c : {Int(2), Int(3), Int(5), Int(7), Int(11)}) {
        auto z2 = cone_z2();
        auto a = fixture_curved_pair(z2, 4, c, lv({1, 0}));
        CurvedAlgebra b(z2, 4, {}, 4);
        Bimodule m(a, b, {}, 4);
        // library level: obstruction at order one
        bool lib_halt = false;
        try {
            TriangleAlgebra t(a, b, m);
            TransferOptions opt;
            opt.order = 4;
            transfer_mc(t, m.zero_element(0), b.zero_element(1), opt);
        } catch (const ObstructionError& e) {
            lib_halt = (e.order == 1);
        }
        // front end: exit code 3
        io::json j;
        j["A"] = io::algebra_to_json(a);
        j["B"] = io::algebra_to_json(b);
        j["M"] = io::bimodule_to_json(m);
        j["m0"] = io::element_to_json(m.zero_element(0), m.basis());
        j["b"] = io::element_to_json(b.zero_element(1), b.basis());
        j["N"] = 4;
        fs::path p = tmp / ("obstructed_" + c.get_str() + ".json");
        io::save_json_file(p, j);
        std::string cmd = std::string(AINFCALC_CLI_PATH) + " transfer " + p.string() +
                          " > /dev/null 2>&1";
        int status = std::system(cmd.c_str());
        bool cli_halt = WIFEXITED(status) && WEXITSTATUS(status) == 3;
        if (lib_halt && cli_halt) ++halted;
    }
    std::error_code ec;
    fs::remove_all(tmp, ec);

    double dt = seconds_since(start);
    report(5, "transfer soundness by independent substitution + obstructed halts",
           ok && solved >= 20 && halted == 5 && dt < 60.0,
           std::to_string(solved) + " solved, " + std::to_string(halted) +
               " halted with exit 3, " + std::to_string(dt) + "s");
}

// ------------------------------------------------------------- 6 and 7

GeometrySpec acceptance_geometry_a() {
    GeometrySpec g;
    g.n = 3;
    g.divisors = {"q1", "q2", "q3"};
    g.classes.push_back({"A", 2, {1, 0, 0}, {0u, 1u}});
    g.classes.push_back({"B", 0, {0, 1, 0}, {0u, 2u, 6u}});
    g.classes.push_back({"L", 1, {1, 1, 0}, {0u}});
    g.validate();
    return g;
}

GeometrySpec acceptance_geometry_b() {
    GeometrySpec g;
    g.n = 2;
    g.divisors = {"q1", "q2"};
    g.classes.push_back({"S", 0, {2, 0}, {0u, 1u}});
    g.classes.push_back({"T", 1, {0, 1}, {0u, 2u}});
    g.validate();
    return g;
}

void criteria_dimension_formulas() {
    auto start = std::chrono::steady_clock::now();
    bool consistent = true;  // both branches agree: dim_gamma throws otherwise
    bool bounded = true;
    bool equality_exact = true;
    long long total = 0;
    for (auto geom : {acceptance_geometry_a(), acceptance_geometry_b()}) {
        ClassBudget budget;
        budget.counts.assign(geom.classes.size(), 1);
        for (int k = 0; k <= 3; ++k) {
            std::vector<CombinatorialType> types;
            try {
                types = enumerate_types(geom, k, budget, 4);
            } catch (const InvariantError&) {
                consistent = false;
                break;
            }
            for (const auto& t : types) {
                long long dim = 0, bound = 0;
                try {
                    dim = dim_gamma(geom, t, k);
                } catch (const InvariantError&) {
                    consistent = false;
                    continue;
                }
                bound = dim_upper_bound(geom, t, k);
                if (dim > bound) bounded = false;
                bool all_free = true;
                for (DivisorSet K : t.containment)
                    if (K != 0) all_free = false;
                // chern loss vanishes exactly on the free subfamily in
                // these geometries (contained classes meet their divisor)
                if ((dim == bound) != all_free) equality_exact = false;
                ++total;
            }
        }
    }
    double dt = seconds_since(start);
    report(6, "dimension formula branches agree over the enumeration",
           consistent && total >= 2000 && dt < 30.0,
           std::to_string(total) + " types in " + std::to_string(dt) + "s");
    report(7, "dimension bound with equality exactly on the free no-loss subfamily",
           bounded && equality_exact);
}

// ---------------------------------------------------------------- 8

void criterion_exclusion() {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    long long audits = 0;
    struct Case {
        GeometrySpec geom;
        ClassBudget budget;
    };
    std::vector<Case> cases;
    {
        GeometrySpec cy;
        cy.n = 3;
        cy.divisors = {"q1", "q2"};
        cy.classes.push_back({"S", 0, {1, 0}, {0u}});
        cy.classes.push_back({"T", 0, {0, 2}, {0u}});
        cy.validate();
        cases.push_back({cy, ClassBudget{{1, 1}}});
    }
    {
        GeometrySpec fano;
        fano.n = 3;
        fano.divisors = {"q1", "q2"};
        fano.classes.push_back({"A", 2, {1, 0}, {0u, 1u}});
        fano.classes.push_back({"L", 1, {1, 1}, {0u}});
        fano.validate();
        cases.push_back({fano, ClassBudget{{1, 1}}});
        cases.push_back({fano, ClassBudget{{0, 1}}});
    }
    for (const auto& c : cases) {
        for (int k = 0; k <= 3 && ok; ++k) {
            for (long long ia = 0; ia + k <= 3 && ok; ++ia) {
                auto reportx = sphere_exclusion(c.geom, ia, k, c.budget, 2);
                if (!reportx.exclusion_holds) ok = false;
                ++audits;
            }
        }
    }
    double dt = seconds_since(start);
    report(8, "sphere exclusion: survivors are exactly canonical no-bubble",
           ok && dt < 60.0, std::to_string(audits) + " audits in " + std::to_string(dt) + "s");
}

// ---------------------------------------------------------------- 9

void criterion_strata() {
    bool ok = true;
    ok = ok && enumerate_dm_strata(2, 0, 4).size() == 1;
    ok = ok && enumerate_dm_strata(3, 0, 4).size() == 3;
    ok = ok && enumerate_dm_strata(0, 1, 4).size() == 1;
    for (auto [k, l] : std::vector<std::pair<int, int>>{{2, 0}, {3, 0}, {0, 1}, {1, 1}, {4, 0}}) {
        for (const auto& s : enumerate_dm_strata(k, l, 4)) {
            if (s.codimension() !=
                static_cast<int>(s.disc_edges.size() + s.sphere_edges.size()))
                ok = false;
        }
    }
    report(9, "boundary stratum counts and codimensions", ok,
           "(2,0) -> 1, (3,0) -> 3, (0,1) -> 1");
}

// ---------------------------------------------------------------- 10

Int acceptance_det(IntMat m) {
    const Eigen::Index n = m.rows();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            Eigen::Index piv = -1;
            for (Eigen::Index i = k + 1; i < n; ++i)
                if (m(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (Eigen::Index j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : Int(-m(n - 1, n - 1));
}

void criterion_snf() {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::mt19937_64 rng(1010);
    std::uniform_int_distribution<int> entry(-20, 20);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        Eigen::Index r = dim(rng), c = dim(rng);
        IntMat m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = entry(rng);
        auto s = smith_normal_form(m);
        if (IntMat(s.u * m * s.v) != s.d) ok = false;
        Int du = acceptance_det(s.u), dv = acceptance_det(s.v);
        if (!(du == 1 || du == -1) || !(dv == 1 || dv == -1)) ok = false;
        for (int i = 0; i + 1 < s.rank; ++i)
            if (s.d(i, i) <= 0 || s.d(i + 1, i + 1) % s.d(i, i) != 0) ok = false;
    }
    // cones of isomorphisms
    std::uniform_int_distribution<int> small(1, 3);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int trial = 0; trial < 200 && ok; ++trial) {
        Eigen::Index ne = small(rng), no = small(rng);
        auto unimodular = [&](Eigen::Index n) {
            IntMat u(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) u(i, j) = (i == j) ? 1 : 0;
            for (int step = 0; step < 3 * n; ++step) {
                Eigen::Index a = static_cast<Eigen::Index>(rng() % n);
                Eigen::Index b = static_cast<Eigen::Index>(rng() % n);
                if (a == b) continue;
                Int c = coef(rng);
                for (Eigen::Index j = 0; j < n; ++j) u(a, j) += c * u(b, j);
            }
            return u;
        };
        IntComplex x = IntComplex::zero(ne, no);
        IntComplex y = IntComplex::zero(ne, no);
        if (!is_acyclic(mapping_cone(x, y, unimodular(ne), unimodular(no)))) ok = false;
    }
    double dt = seconds_since(start);
    report(10, "smith form identity and cone-of-isomorphism acyclicity", ok,
           "1000 + 200 seeded cases in " + std::to_string(dt) + "s");
}

// ---------------------------------------------------------------- 11

void criterion_gr0() {
    bool ok = true;
    auto z2 = cone_z2();
    std::mt19937_64 rng(11011);
    std::vector<CurvedAlgebra> fixtures;
    fixtures.push_back(fixture_unit_ring(z2, 4));
    fixtures.push_back(fixture_f1(z2, 4, 2));
    fixtures.push_back(fixture_f5(z2, 4));
    fixtures.push_back(fixture_f6(z2, 4, 3));
    fixtures.push_back(fixture_curved_pair(z2, 4, 2, lv({1, 0})));
    for (int trial = 0; trial < 5; ++trial) {
        auto base = fixture_f6(z2, 4, Int(1 + trial));
        fixtures.push_back(deform(base, random_odd_element(base, rng)));
    }
    for (const auto& a : fixtures) {
        auto g = gr0(a);
        // independent reduction: termwise constant parts
        for (int k = 0; k <= a.max_arity(); ++k) {
            std::map<Tuple, std::map<int, Int>> expected;
            for (const auto& [tuple, col] : a.ops(k)) {
                for (const auto& [idx, s] : col) {
                    Int c = s.constant_term();
                    if (c != 0) expected[tuple][idx] = c;
                }
            }
            std::map<Tuple, std::map<int, Int>> got;
            for (const auto& [tuple, col] : g.ops(k)) {
                for (const auto& [idx, s] : col) got[tuple][idx] = s.constant_term();
            }
            if (expected != got) ok = false;
        }
        if (!g.curvature().is_zero()) ok = false;
    }
    report(11, "level-0 reduction equals the termwise constant part", ok,
           std::to_string(fixtures.size()) + " fixture algebras");
}

}  // namespace

int main() {
    criterion_ring_laws();
    criterion_ord_oracle();
    criterion_novikov();
    criterion_relation_closure();
    criterion_transfer();
    criteria_dimension_formulas();
    criterion_exclusion();
    criterion_strata();
    criterion_snf();
    criterion_gr0();
    if (criteria_failed == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion/criteria failed\n", criteria_failed);
    return 1;
}
