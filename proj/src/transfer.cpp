#include "ainfcalc/transfer.hpp"

#include <sstream>

namespace ainf {

namespace {

struct GrIndexing {
    // positions of the A+M block basis elements, per triangle parity
    std::vector<int> even_idx;  // global triangle indices
    std::vector<int> odd_idx;
    std::vector<int> b_idx;  // global indices of the B block
};

GrIndexing index_triangle(const TriangleAlgebra& t) {
    GrIndexing g;
    const CurvedAlgebra& tot = t.algebra();
    for (int i = 0; i < tot.rank(); ++i) {
        if (i >= t.b_offset()) {
            g.b_idx.push_back(i);
            continue;
        }
        (tot.parity(i) == 0 ? g.even_idx : g.odd_idx).push_back(i);
    }
    return g;
}

// The level-0 differential of the triangle deformed by the level-0 part
// of m0, restricted to the A+M block: d(x) = mu1(x) + mu2(m0,x) + mu2(x,m0).
Element gr_differential(const CurvedAlgebra& g0, const Element& m0g, int basis_index) {
    Element x = g0.basis_element(basis_index);
    Element out = g0.mu({x});
    out = out + g0.mu({m0g, x});
    out = out + g0.mu({x, m0g});
    return out;
}

struct GrMatrices {
    IntMat odd_to_even;  // corrections (odd) -> defect change (even)
    IntMat even_to_odd;  // closedness of even obstructions
    SnfResult oe_snf;
};

GrMatrices build_gr_matrices(const TriangleAlgebra& t, const Element& m0, const GrIndexing& gi) {
    CurvedAlgebra g0 = gr0(t.algebra());
    // level-0 part of the embedded seed
    Element m0hat = t.embed_m(m0);
    Element m0g = g0.zero_element(1);
    for (int i = 0; i < g0.rank(); ++i) {
        Int c = m0hat.coeff(i).constant_term();
        if (c != 0) m0g.add_coeff(i, PowerSeries::constant(g0.cone(), 1, c));
    }
    const auto ne = static_cast<Eigen::Index>(gi.even_idx.size());
    const auto no = static_cast<Eigen::Index>(gi.odd_idx.size());
    GrMatrices m{IntMat(ne, no), IntMat(no, ne), {}};
    for (Eigen::Index c = 0; c < no; ++c) {
        Element im = gr_differential(g0, m0g, gi.odd_idx[static_cast<size_t>(c)]);
        for (Eigen::Index r = 0; r < ne; ++r)
            m.odd_to_even(r, c) = im.coeff(gi.even_idx[static_cast<size_t>(r)]).constant_term();
    }
    for (Eigen::Index c = 0; c < ne; ++c) {
        Element im = gr_differential(g0, m0g, gi.even_idx[static_cast<size_t>(c)]);
        for (Eigen::Index r = 0; r < no; ++r)
            m.even_to_odd(r, c) = im.coeff(gi.odd_idx[static_cast<size_t>(r)]).constant_term();
    }
    m.oe_snf = smith_normal_form(m.odd_to_even);
    return m;
}

// Defect terms of exact adic order k, bucketed by exponent monomial:
// monomial -> vector over the A+M even indices.
std::map<LatticeVec, IntVec, LexLess> grade_slice(const Element& defect, int k,
                                                  const GrIndexing& gi) {
    std::map<LatticeVec, IntVec, LexLess> out;
    const auto ne = static_cast<Eigen::Index>(gi.even_idx.size());
    for (Eigen::Index r = 0; r < ne; ++r) {
        const PowerSeries& s = defect.coeff(gi.even_idx[static_cast<size_t>(r)]);
        for (const auto& [alpha, c] : s.terms()) {
            if (s.cone()->ord(alpha) != k) continue;
            auto it = out.find(alpha);
            if (it == out.end()) {
                IntVec v(ne);
                for (Eigen::Index i = 0; i < ne; ++i) v[i] = 0;
                it = out.emplace(alpha, std::move(v)).first;
            }
            it->second[r] = c;
        }
    }
    return out;
}

std::optional<IntVec> solve_with_snf(const SnfResult& s, Eigen::Index rows, Eigen::Index cols,
                                     const IntVec& b) {
    IntVec ub = s.u * b;
    IntVec y(cols);
    for (Eigen::Index i = 0; i < cols; ++i) y[i] = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        Int di = (i < std::min(rows, cols)) ? s.d(i, i) : Int(0);
        if (di == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % di != 0) return std::nullopt;
            if (i < cols) y[i] = ub[i] / di;
        }
    }
    return IntVec(s.v * y);
}

}  // namespace

TransferResult transfer_mc(const TriangleAlgebra& t, const Element& m0, const Element& b,
                           const TransferOptions& options) {
    const CurvedAlgebra& tot = t.algebra();
    const int order = std::min(options.order > 0 ? options.order : tot.trunc_order(),
                               tot.trunc_order());
    if (m0.parity() != 0)
        throw InvariantError("transfer: m0 must be even in the module");
    if (b.parity() != 1) throw InvariantError("transfer: b must be odd");
    if (!b.is_zero() && b.valuation() < 1)
        throw InvariantError("transfer: b must have valuation >= 1");
    if (!t.module_differential(m0).is_zero() && t.module_differential(m0).valuation() < 1)
        throw InvariantError("transfer: m0 is not closed at level 0");
    if (options.precheck_quasi_iso && !is_quasi_iso(t.m_part(), m0))
        throw InvariantError("transfer: m0 is not an integral quasi-isomorphism");

    GrIndexing gi = index_triangle(t);
    GrMatrices mats = build_gr_matrices(t, m0, gi);
    const auto ne = static_cast<Eigen::Index>(gi.even_idx.size());
    const auto no = static_cast<Eigen::Index>(gi.odd_idx.size());

    Element a_cur = t.a_part().zero_element(1);
    Element m_cur = m0;

    TransferResult result{a_cur, m_cur, 0, {}, false, false, false, std::nullopt};

    for (int k = 1; k < order; ++k) {
        Element tvec = t.embed_a(a_cur) + t.embed_m(m_cur) + t.embed_b(b);
        Element defect = tot.insertion_defect(tvec);

        // the B component of the defect is the Maurer-Cartan defect of b
        for (int bi : gi.b_idx) {
            const PowerSeries& s = defect.coeff(bi);
            for (const auto& [alpha, c] : s.terms()) {
                if (s.cone()->ord(alpha) == k && c != 0)
                    throw InvariantError(
                        "transfer: B component of the obstruction is nonzero at order " +
                        std::to_string(k) + " (b is not Maurer-Cartan to this order)");
            }
        }

        auto slice = grade_slice(defect, k, gi);
        TransferOrderLog log{k, static_cast<int>(slice.size()), true, ""};
        if (slice.empty()) {
            log.note = "no obstruction";
            result.log.push_back(log);
            continue;
        }

        // closedness of the obstruction under the level-0 differential
        for (const auto& [alpha, vec] : slice) {
            IntVec img = mats.even_to_odd * vec;
            for (Eigen::Index i = 0; i < img.size(); ++i) {
                if (img[i] != 0)
                    throw InvariantError("transfer: obstruction at order " + std::to_string(k) +
                                         " is not closed (input relations violated)");
            }
        }

        for (const auto& [alpha, vec] : slice) {
            IntVec rhs(ne);
            for (Eigen::Index i = 0; i < ne; ++i) rhs[i] = -vec[i];
            auto sol = solve_with_snf(mats.oe_snf, ne, no, rhs);
            if (!sol) {
                std::ostringstream os;
                os << "transfer: integer system unsolvable at order " << k
                   << " (comparison element is not an integral quasi-isomorphism)";
                log.solved = false;
                log.note = os.str();
                result.log.push_back(log);
                throw ObstructionError(os.str(), k);
            }
            // distribute the correction into the A and M components
            PowerSeries mono = PowerSeries::monomial(tot.cone(), tot.trunc_order(), alpha, 1);
            for (Eigen::Index i = 0; i < no; ++i) {
                if ((*sol)[i] == 0) continue;
                int g = gi.odd_idx[static_cast<size_t>(i)];
                PowerSeries term = mono.scaled((*sol)[i]);
                if (g < t.m_offset()) {
                    a_cur.add_coeff(g, term);
                } else {
                    m_cur.add_coeff(g - t.m_offset(), term);
                }
            }
        }
        log.note = "solved";
        result.log.push_back(log);
    }

    // final verification by direct substitution
    if (!verify_transfer(t, a_cur, m_cur, b))
        throw InvariantError("transfer: defect nonzero after the final order (internal error)");
    result.a = a_cur;
    result.m = m_cur;
    result.order_achieved = order;

    if (options.e_b) {
        result.cunit_requested = true;
        {
            const Element& e_b = *options.e_b;
            if (e_b.parity() != 0) throw InvariantError("transfer: e_b must be even");
            // deformed triangle by the full solution t
            Element tvec = t.embed_a(a_cur) + t.embed_m(m_cur) + t.embed_b(b);
            CurvedAlgebra td = t.deform_by_t(tvec);
            Element lift = t.embed_b(e_b);
            SnfResult eo_snf = smith_normal_form(mats.even_to_odd);
            bool ok = true;
            for (int k = 0; k < order && ok; ++k) {
                Element d = td.mu({lift});
                // B block must vanish identically: e_b closed in the deformed B
                for (int bi : gi.b_idx) {
                    const PowerSeries& s = d.coeff(bi);
                    if (!s.is_zero())
                        throw InvariantError("transfer: e_b is not closed in the deformed B");
                }
                std::map<LatticeVec, IntVec, LexLess> slice;
                for (Eigen::Index r = 0; r < no; ++r) {
                    const PowerSeries& s = d.coeff(gi.odd_idx[static_cast<size_t>(r)]);
                    for (const auto& [alpha, c] : s.terms()) {
                        if (s.cone()->ord(alpha) != k) continue;
                        auto it = slice.find(alpha);
                        if (it == slice.end()) {
                            IntVec v(no);
                            for (Eigen::Index i = 0; i < no; ++i) v[i] = 0;
                            it = slice.emplace(alpha, std::move(v)).first;
                        }
                        it->second[r] = c;
                    }
                }
                if (slice.empty()) continue;
                for (const auto& [alpha, vec] : slice) {
                    IntVec rhs(no);
                    for (Eigen::Index i = 0; i < no; ++i) rhs[i] = -vec[i];
                    auto sol = solve_with_snf(eo_snf, no, ne, rhs);
                    if (!sol) {
                        ok = false;
                        break;
                    }
                    PowerSeries mono =
                        PowerSeries::monomial(tot.cone(), tot.trunc_order(), alpha, 1);
                    for (Eigen::Index i = 0; i < ne; ++i) {
                        if ((*sol)[i] == 0) continue;
                        lift.add_coeff(gi.even_idx[static_cast<size_t>(i)],
                                       mono.scaled((*sol)[i]));
                    }
                }
            }
            if (ok && !td.mu({lift}).is_zero()) ok = false;
            result.cunit_lifted = ok;
            if (ok) {
                Element e_a = t.project_a(lift);
                result.e_a = e_a;
                CurvedAlgebra a_def = deform(t.a_part(), a_cur);
                bool closed = a_def.mu({e_a}).is_zero();
                result.cunit_verified = closed && verify_cunit(a_def, e_a);
            }
        }
    }
    return result;
}

TransferResult transfer_mc(const CurvedAlgebra& a, const CurvedAlgebra& b_alg, const Bimodule& m,
                           const Element& m0, const Element& b, int order) {
    TriangleAlgebra t(a, b_alg, m);
    TransferOptions opt;
    opt.order = order;
    return transfer_mc(t, m0, b, opt);
}

bool verify_transfer(const TriangleAlgebra& t, const Element& a, const Element& m,
                     const Element& b) {
    Element tvec = t.embed_a(a) + t.embed_m(m) + t.embed_b(b);
    return t.algebra().insertion_defect(tvec).is_zero();
}

}  // namespace ainf
