#pragma once

#include "ainfcalc/ainfty.hpp"
#include "ainfcalc/intlinalg.hpp"

namespace ainf {

/// An (A,B)-bimodule presented by a finite free basis (parities stored
/// unshifted) and operation tensors mu^{i|1|j}: i left-algebra arguments,
/// the module argument, then j right-algebra arguments. The tensors are
/// exactly the mixed components of the triangle algebra A + M[-1] + B, so
/// the degree rule is out = inputs + i + j + 1 (mod 2), the shift of the
/// module slot accounted for.
class Bimodule {
public:
    Bimodule(CurvedAlgebra left, CurvedAlgebra right, std::vector<BasisGen> basis, int max_arity);

    const CurvedAlgebra& left() const { return left_; }
    const CurvedAlgebra& right() const { return right_; }
    const std::vector<BasisGen>& basis() const { return basis_; }
    int rank() const { return static_cast<int>(basis_.size()); }
    int parity(int i) const { return basis_.at(static_cast<size_t>(i)).parity; }
    int max_arity() const { return max_arity_; }
    const ConePtr& cone() const { return left_.cone(); }
    int trunc_order() const { return left_.trunc_order(); }
    int index_of(const std::string& name) const;

    /// tuple layout: i left-basis indices, one module index, j right-basis
    /// indices; output indexes the module basis.
    void set_op(int i, int j, const Tuple& inputs, int output, PowerSeries coeff);
    const std::map<std::pair<std::pair<int, int>, Tuple>, SparseCol>& ops() const { return ops_; }

    Element zero_element(int parity) const {
        return Element(cone(), trunc_order(), rank(), parity);
    }

private:
    CurvedAlgebra left_;
    CurvedAlgebra right_;
    std::vector<BasisGen> basis_;
    int max_arity_;
    std::map<std::pair<std::pair<int, int>, Tuple>, SparseCol> ops_;
};

/// The diagonal bimodule of an algebra over itself: module = the algebra,
/// action maps the multi-argument products, with the shift twists baked in
/// so that the triangle of three copies passes the relation check whenever
/// the algebra does.
Bimodule diagonal_bimodule(const CurvedAlgebra& a);

/// The triangle algebra on A + M[-1] + B with the four-case operations,
/// assembled as a single curved algebra (module parities shifted by one).
class TriangleAlgebra {
public:
    TriangleAlgebra(CurvedAlgebra a, CurvedAlgebra b, Bimodule m);

    const CurvedAlgebra& algebra() const { return total_; }
    const CurvedAlgebra& a_part() const { return a_; }
    const CurvedAlgebra& b_part() const { return b_; }
    const Bimodule& m_part() const { return m_; }

    int a_offset() const { return 0; }
    int m_offset() const { return a_.rank(); }
    int b_offset() const { return a_.rank() + m_.rank(); }

    Element embed_a(const Element& x) const;
    /// Module elements flip parity under the shift.
    Element embed_m(const Element& x) const;
    Element embed_b(const Element& x) const;
    Element project_a(const Element& x) const;
    Element project_m(const Element& x) const;
    Element project_b(const Element& x) const;

    /// mu^{0|1|0}(f) as a module element (f given unshifted).
    Element module_differential(const Element& f) const;

    /// The deformation of the triangle by a closed element f of the
    /// module part (valuation 0 permitted: f occurs at most once in any
    /// product). With check_only_closed = false, f must additionally be a
    /// quasi-isomorphism.
    CurvedAlgebra deform_by_f(const Element& f, bool check_only_closed = true) const;

    /// Deformation by a full lower-triangular element t = a + m + b given
    /// as an element of the assembled algebra (odd; a and b parts must
    /// have valuation >= 1).
    CurvedAlgebra deform_by_t(const Element& t) const;

private:
    CurvedAlgebra a_;
    CurvedAlgebra b_;
    Bimodule m_;
    CurvedAlgebra total_;
};

TriangleAlgebra build_triangle(const CurvedAlgebra& a, const CurvedAlgebra& b, const Bimodule& m);

/// Extracts the bimodule (mixed-pattern tensors) from a triangle-shaped
/// algebra whose basis splits as a-rank, m-rank, b-rank. Used to produce
/// twisted-diagonal bimodules from deformed triangles.
Bimodule extract_bimodule(const CurvedAlgebra& total, const CurvedAlgebra& a,
                          const CurvedAlgebra& b, const std::vector<BasisGen>& m_basis,
                          int max_arity);

/// Level-0 data of the two comparison chain maps attached to f.
struct ProjectionReport {
    Homology ker_pi_b;  // cone of mu^{1|1|0}(-; f): A -> M
    Homology ker_pi_a;  // cone of mu^{0|1|1}(f; -): B -> M
    bool ker_pi_b_acyclic = false;
    bool ker_pi_a_acyclic = false;
    bool f_closed = false;
    bool both_acyclic() const { return f_closed && ker_pi_b_acyclic && ker_pi_a_acyclic; }
};

ProjectionReport verify_projections(const TriangleAlgebra& t, const Element& f);

/// f closed and both mapping cones integrally acyclic at level 0.
bool is_quasi_iso(const Bimodule& m, const Element& f);

}  // namespace ainf
