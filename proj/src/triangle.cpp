#include "ainfcalc/triangle.hpp"

namespace ainf {

Bimodule::Bimodule(CurvedAlgebra left, CurvedAlgebra right, std::vector<BasisGen> basis,
                   int max_arity)
    : left_(std::move(left)), right_(std::move(right)), basis_(std::move(basis)),
      max_arity_(max_arity) {
    if (!same_cone(left_.cone(), right_.cone()))
        throw InvariantError("bimodule: algebra cone mismatch");
    if (left_.trunc_order() != right_.trunc_order())
        throw InvariantError("bimodule: truncation mismatch");
}

int Bimodule::index_of(const std::string& name) const {
    for (int i = 0; i < rank(); ++i)
        if (basis_[static_cast<size_t>(i)].name == name) return i;
    throw InvariantError("bimodule: unknown basis name '" + name + "'");
}

void Bimodule::set_op(int i, int j, const Tuple& inputs, int output, PowerSeries coeff) {
    if (i < 0 || j < 0 || i + j + 1 > max_arity_)
        throw InvariantError("bimodule: arity out of range");
    if (static_cast<int>(inputs.size()) != i + j + 1)
        throw InvariantError("bimodule: tuple length mismatch");
    int in_par = 0;
    for (int p = 0; p < i; ++p) {
        int idx = inputs[static_cast<size_t>(p)];
        if (idx < 0 || idx >= left_.rank()) throw InvariantError("bimodule: left index out of range");
        in_par += left_.parity(idx);
    }
    {
        int idx = inputs[static_cast<size_t>(i)];
        if (idx < 0 || idx >= rank()) throw InvariantError("bimodule: module index out of range");
        in_par += parity(idx);
    }
    for (int p = 0; p < j; ++p) {
        int idx = inputs[static_cast<size_t>(i + 1 + p)];
        if (idx < 0 || idx >= right_.rank()) throw InvariantError("bimodule: right index out of range");
        in_par += right_.parity(idx);
    }
    if (output < 0 || output >= rank()) throw InvariantError("bimodule: output index out of range");
    if (((in_par + i + j + 1) & 1) != parity(output))
        throw InvariantError("bimodule: degree rule violated");
    if (coeff.is_zero()) return;
    auto key = std::make_pair(std::make_pair(i, j), inputs);
    auto& col = ops_[key];
    auto it = col.find(output);
    if (it == col.end()) col.emplace(output, std::move(coeff));
    else {
        it->second += coeff;
        if (it->second.is_zero()) col.erase(it);
    }
    if (col.empty()) ops_.erase(key);
}

Bimodule diagonal_bimodule(const CurvedAlgebra& a) {
    Bimodule m(a, a, a.basis(), a.max_arity());
    // The module slot is shifted down by one, so a product tensor acquires
    // the shift factor (-1)^(i + 1 + sum of parities left of the slot):
    // the module differential is negated, the left action loses its
    // encoding twist, the right action keeps an overall minus.
    for (int k = 1; k <= a.max_arity(); ++k) {
        for (const auto& [tuple, col] : a.ops(k)) {
            for (int slot = 0; slot < k; ++slot) {
                int exp = slot + 1;
                for (int q = 0; q < slot; ++q)
                    exp += a.parity(tuple[static_cast<size_t>(q)]);
                int sign = (exp & 1) ? -1 : 1;
                for (const auto& [idx, s] : col) {
                    m.set_op(slot, k - 1 - slot, tuple, idx, sign > 0 ? s : s.scaled(Int(-1)));
                }
            }
        }
    }
    return m;
}

TriangleAlgebra::TriangleAlgebra(CurvedAlgebra a, CurvedAlgebra b, Bimodule m)
    : a_(std::move(a)), b_(std::move(b)), m_(std::move(m)),
      total_([&]() {
          if (!same_cone(a_.cone(), b_.cone()) || !same_cone(a_.cone(), m_.cone()))
              throw InvariantError("triangle: cone mismatch");
          if (a_.trunc_order() != b_.trunc_order() || a_.trunc_order() != m_.trunc_order())
              throw InvariantError("triangle: truncation mismatch");
          int max_arity = std::max({a_.max_arity(), b_.max_arity(), m_.max_arity()});
          std::vector<BasisGen> basis;
          basis.reserve(static_cast<size_t>(a_.rank() + m_.rank() + b_.rank()));
          for (const auto& g : a_.basis()) basis.push_back({"A." + g.name, g.parity});
          for (const auto& g : m_.basis()) basis.push_back({"M." + g.name, (g.parity + 1) & 1});
          for (const auto& g : b_.basis()) basis.push_back({"B." + g.name, g.parity});
          return CurvedAlgebra(a_.cone(), a_.trunc_order(), std::move(basis), max_arity);
      }()) {
    const int am = a_.rank();
    const int bm = am + m_.rank();
    for (int k = 0; k <= a_.max_arity(); ++k) {
        for (const auto& [tuple, col] : a_.ops(k)) {
            for (const auto& [idx, s] : col) total_.set_op(k, tuple, idx, s);
        }
    }
    for (int k = 0; k <= b_.max_arity(); ++k) {
        for (const auto& [tuple, col] : b_.ops(k)) {
            Tuple shifted(tuple);
            for (auto& t : shifted) t += bm;
            for (const auto& [idx, s] : col) total_.set_op(k, shifted, idx + bm, s);
        }
    }
    for (const auto& [key, col] : m_.ops()) {
        const auto& [ij, tuple] = key;
        const int i = ij.first, j = ij.second;
        Tuple shifted(tuple);
        shifted[static_cast<size_t>(i)] += am;
        for (int p = 0; p < j; ++p) shifted[static_cast<size_t>(i + 1 + p)] += bm;
        for (const auto& [idx, s] : col)
            total_.set_op(i + 1 + j, shifted, idx + am, s);
    }
}

TriangleAlgebra build_triangle(const CurvedAlgebra& a, const CurvedAlgebra& b, const Bimodule& m) {
    return TriangleAlgebra(a, b, m);
}

Element TriangleAlgebra::embed_a(const Element& x) const {
    Element out = total_.zero_element(x.parity());
    for (int i = 0; i < a_.rank(); ++i) out.set_coeff(i, x.coeff(i));
    return out;
}

Element TriangleAlgebra::embed_m(const Element& x) const {
    Element out = total_.zero_element((x.parity() + 1) & 1);
    for (int i = 0; i < m_.rank(); ++i) out.set_coeff(m_offset() + i, x.coeff(i));
    return out;
}

Element TriangleAlgebra::embed_b(const Element& x) const {
    Element out = total_.zero_element(x.parity());
    for (int i = 0; i < b_.rank(); ++i) out.set_coeff(b_offset() + i, x.coeff(i));
    return out;
}

Element TriangleAlgebra::project_a(const Element& x) const {
    Element out = a_.zero_element(x.parity());
    for (int i = 0; i < a_.rank(); ++i) out.set_coeff(i, x.coeff(i));
    return out;
}

Element TriangleAlgebra::project_m(const Element& x) const {
    Element out = m_.zero_element((x.parity() + 1) & 1);
    for (int i = 0; i < m_.rank(); ++i) out.set_coeff(i, x.coeff(m_offset() + i));
    return out;
}

Element TriangleAlgebra::project_b(const Element& x) const {
    Element out = b_.zero_element(x.parity());
    for (int i = 0; i < b_.rank(); ++i) out.set_coeff(i, x.coeff(b_offset() + i));
    return out;
}

Element TriangleAlgebra::module_differential(const Element& f) const {
    return project_m(total_.mu({embed_m(f)}));
}

CurvedAlgebra TriangleAlgebra::deform_by_f(const Element& f, bool check_only_closed) const {
    if (f.rank() != m_.rank()) throw InvariantError("triangle: f must live in the module part");
    if (f.parity() != 0)
        throw InvariantError("triangle: f must be even in the module (degree 1 in the triangle)");
    if (!module_differential(f).is_zero())
        throw InvariantError("triangle: f is not closed");
    if (!check_only_closed && !is_quasi_iso(m_, f))
        throw InvariantError("triangle: f is not a quasi-isomorphism");
    return deform_impl(total_, embed_m(f), /*allow_val0=*/true);
}

CurvedAlgebra TriangleAlgebra::deform_by_t(const Element& t) const {
    if (t.parity() != 1) throw InvariantError("triangle: t must be odd");
    if (t.rank() != total_.rank()) throw InvariantError("triangle: t rank mismatch");
    Element a = project_a(t);
    Element b = project_b(t);
    if ((!a.is_zero() && a.valuation() < 1) || (!b.is_zero() && b.valuation() < 1))
        throw InvariantError("triangle: algebra components of t need valuation >= 1");
    return deform_impl(total_, t, /*allow_val0=*/true);
}

Bimodule extract_bimodule(const CurvedAlgebra& total, const CurvedAlgebra& a,
                          const CurvedAlgebra& b, const std::vector<BasisGen>& m_basis,
                          int max_arity) {
    const int am = a.rank();
    const int mr = static_cast<int>(m_basis.size());
    const int bm = am + mr;
    if (total.rank() != am + mr + b.rank())
        throw InvariantError("extract: rank mismatch");
    Bimodule m(a, b, m_basis, max_arity);
    for (int k = 1; k <= total.max_arity(); ++k) {
        for (const auto& [tuple, col] : total.ops(k)) {
            // classify pattern: i leading a-indices, one m-index, j trailing b-indices
            int i = 0;
            while (i < k && tuple[static_cast<size_t>(i)] < am) ++i;
            if (i == k) continue;  // pure a-pattern
            int mpos = i;
            if (tuple[static_cast<size_t>(mpos)] >= bm) {
                continue;  // pure/mixed b-pattern without module slot
            }
            bool valid = true;
            for (int p = mpos + 1; p < k; ++p)
                if (tuple[static_cast<size_t>(p)] < bm) { valid = false; break; }
            if (!valid) continue;  // more than one module slot or out of order
            Tuple local(tuple);
            local[static_cast<size_t>(mpos)] -= am;
            for (int p = mpos + 1; p < k; ++p) local[static_cast<size_t>(p)] -= bm;
            for (const auto& [idx, s] : col) {
                if (idx < am || idx >= bm)
                    throw InvariantError("extract: mixed pattern does not output to the module");
                m.set_op(mpos, k - 1 - mpos, local, idx - am, s);
            }
        }
    }
    return m;
}

namespace {

struct GradedComplexData {
    std::vector<int> even_idx;
    std::vector<int> odd_idx;
    IntComplex complex = IntComplex::zero(0, 0);
};

// level-0 complex of an algebra from its mu^1 tensors
GradedComplexData level0_complex(const CurvedAlgebra& a) {
    GradedComplexData out;
    for (int i = 0; i < a.rank(); ++i)
        (a.parity(i) == 0 ? out.even_idx : out.odd_idx).push_back(i);
    const auto ne = static_cast<Eigen::Index>(out.even_idx.size());
    const auto no = static_cast<Eigen::Index>(out.odd_idx.size());
    IntMat d_even(no, ne), d_odd(ne, no);
    for (Eigen::Index c = 0; c < ne; ++c)
        for (Eigen::Index r = 0; r < no; ++r) d_even(r, c) = 0;
    for (Eigen::Index c = 0; c < no; ++c)
        for (Eigen::Index r = 0; r < ne; ++r) d_odd(r, c) = 0;
    for (const auto& [tuple, col] : a.ops(1)) {
        int in = tuple[0];
        for (const auto& [idx, s] : col) {
            Int c = s.constant_term();
            if (c == 0) continue;
            if (a.parity(in) == 0) {
                auto row = std::find(out.odd_idx.begin(), out.odd_idx.end(), idx) - out.odd_idx.begin();
                auto colp = std::find(out.even_idx.begin(), out.even_idx.end(), in) - out.even_idx.begin();
                d_even(row, colp) = c;
            } else {
                auto row = std::find(out.even_idx.begin(), out.even_idx.end(), idx) - out.even_idx.begin();
                auto colp = std::find(out.odd_idx.begin(), out.odd_idx.end(), in) - out.odd_idx.begin();
                d_odd(row, colp) = c;
            }
        }
    }
    out.complex = IntComplex(ne, no, d_even, d_odd);
    return out;
}

// level-0 matrix of an (anti)chain map expressed by evaluating `image`
// on each basis element of `dom`
std::pair<IntMat, IntMat> level0_map(const CurvedAlgebra& dom_alg, const GradedComplexData& dom,
                                     const GradedComplexData& cod,
                                     const std::function<Element(int)>& image) {
    const auto dne = static_cast<Eigen::Index>(dom.even_idx.size());
    const auto dno = static_cast<Eigen::Index>(dom.odd_idx.size());
    const auto cne = static_cast<Eigen::Index>(cod.even_idx.size());
    const auto cno = static_cast<Eigen::Index>(cod.odd_idx.size());
    IntMat g_even(cne, dne), g_odd(cno, dno);
    for (Eigen::Index c = 0; c < cne; ++c)
        for (Eigen::Index r = 0; r < dne; ++r) g_even(c, r) = 0;
    for (Eigen::Index c = 0; c < cno; ++c)
        for (Eigen::Index r = 0; r < dno; ++r) g_odd(c, r) = 0;
    (void)dom_alg;
    for (Eigen::Index c = 0; c < dne; ++c) {
        Element im = image(dom.even_idx[static_cast<size_t>(c)]);
        for (Eigen::Index r = 0; r < cne; ++r)
            g_even(r, c) = im.coeff(cod.even_idx[static_cast<size_t>(r)]).constant_term();
    }
    for (Eigen::Index c = 0; c < dno; ++c) {
        Element im = image(dom.odd_idx[static_cast<size_t>(c)]);
        for (Eigen::Index r = 0; r < cno; ++r)
            g_odd(r, c) = im.coeff(cod.odd_idx[static_cast<size_t>(r)]).constant_term();
    }
    return {g_even, g_odd};
}

struct TriangleLevel0 {
    GradedComplexData a;
    GradedComplexData m;  // unshifted module parities
    IntComplex cone_b = IntComplex::zero(0, 0);  // cone of A -> M
    IntComplex cone_a = IntComplex::zero(0, 0);  // cone of B -> M
};

TriangleLevel0 build_level0_cones(const TriangleAlgebra& t, const Element& f) {
    TriangleLevel0 out;
    CurvedAlgebra ga = gr0(t.a_part());
    CurvedAlgebra gb = gr0(t.b_part());
    // module complex: differential from mu^{0|1|0}; build a rank-m algebra
    // holder with unshifted parities just for the complex
    CurvedAlgebra gm_holder(Cone::trivial(), 1, t.m_part().basis(), 1);
    {
        const auto& mpart = t.m_part();
        for (const auto& [key, col] : mpart.ops()) {
            const auto& [ij, tuple] = key;
            if (ij.first != 0 || ij.second != 0) continue;
            for (const auto& [idx, s] : col) {
                Int c = s.constant_term();
                if (c == 0) continue;
                gm_holder.set_op(1, {tuple[0]}, idx, PowerSeries::constant(Cone::trivial(), 1, c));
            }
        }
    }
    GradedComplexData da = level0_complex(ga);
    GradedComplexData dm = level0_complex(gm_holder);
    GradedComplexData db = level0_complex(gb);

    const CurvedAlgebra& tot = t.algebra();
    Element fhat = t.embed_m(f);
    auto amap = [&](int a_idx) {
        Element x = tot.zero_element(t.a_part().parity(a_idx));
        x.set_coeff(a_idx, PowerSeries::constant(tot.cone(), tot.trunc_order(), 1));
        return t.project_m(tot.mu({x, fhat}));
    };
    auto bmap = [&](int b_idx) {
        Element x = tot.zero_element(t.b_part().parity(b_idx));
        x.set_coeff(t.b_offset() + b_idx, PowerSeries::constant(tot.cone(), tot.trunc_order(), 1));
        return t.project_m(tot.mu({fhat, x}));
    };
    auto [ga_even, ga_odd] = level0_map(ga, da, dm, amap);
    auto [gb_even, gb_odd] = level0_map(gb, db, dm, bmap);
    out.a = da;
    out.m = dm;
    out.cone_b = mapping_cone(da.complex, dm.complex, ga_even, ga_odd);
    out.cone_a = mapping_cone(db.complex, dm.complex, gb_even, gb_odd);
    return out;
}

}  // namespace

ProjectionReport verify_projections(const TriangleAlgebra& t, const Element& f) {
    ProjectionReport report;
    report.f_closed = t.module_differential(f).is_zero();
    TriangleLevel0 lv = build_level0_cones(t, f);
    report.ker_pi_b = homology(lv.cone_b);
    report.ker_pi_a = homology(lv.cone_a);
    report.ker_pi_b_acyclic = report.ker_pi_b.even.trivial() && report.ker_pi_b.odd.trivial();
    report.ker_pi_a_acyclic = report.ker_pi_a.even.trivial() && report.ker_pi_a.odd.trivial();
    return report;
}

bool is_quasi_iso(const Bimodule& m, const Element& f) {
    TriangleAlgebra t(m.left(), m.right(), m);
    // closedness of the level-0 class is what the comparison cones see;
    // higher-order parts of the differential do not enter them
    Element df = t.module_differential(f);
    if (!df.is_zero() && df.valuation() < 1) return false;
    ProjectionReport r = verify_projections(t, f);
    return r.ker_pi_b_acyclic && r.ker_pi_a_acyclic;
}

}  // namespace ainf
