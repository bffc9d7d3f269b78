#pragma once

#include "ainfcalc/series.hpp"

#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace ainf {

struct BasisGen {
    std::string name;
    int parity = 0;  // 0 even, 1 odd
};

using Tuple = std::vector<int>;
using SparseCol = std::map<int, PowerSeries>;

/// Homogeneous element of a free module over the cone ring: one series
/// coefficient per basis generator.
class Element {
public:
    Element(ConePtr cone, int trunc, int rank, int parity);

    int parity() const { return parity_; }
    int rank() const { return static_cast<int>(coeffs_.size()); }
    const ConePtr& cone() const { return cone_; }
    int trunc_order() const { return trunc_; }

    const PowerSeries& coeff(int i) const { return coeffs_.at(static_cast<size_t>(i)); }
    void set_coeff(int i, PowerSeries s);
    void add_coeff(int i, const PowerSeries& s);

    bool is_zero() const;
    int valuation() const;

    Element operator+(const Element& rhs) const;
    Element operator-(const Element& rhs) const;
    Element scaled(const Int& c) const;
    Element scaled(const PowerSeries& s) const;

    bool operator==(const Element& rhs) const;

    std::string to_string(const std::vector<BasisGen>& basis) const;

private:
    ConePtr cone_;
    int trunc_;
    int parity_;
    std::vector<PowerSeries> coeffs_;
};

/// A curved filtered A-infinity algebra presented by a finite free basis
/// and sparse operation tensors, over the truncated cone ring. The
/// filtration is the adic one induced on the free module, so filtration
/// bookkeeping reduces to series valuations.
class CurvedAlgebra {
public:
    CurvedAlgebra(ConePtr cone, int trunc, std::vector<BasisGen> basis, int max_arity);

    const ConePtr& cone() const { return cone_; }
    int trunc_order() const { return trunc_; }
    int rank() const { return static_cast<int>(basis_.size()); }
    int max_arity() const { return max_arity_; }
    const std::vector<BasisGen>& basis() const { return basis_; }
    int parity(int i) const { return basis_.at(static_cast<size_t>(i)).parity; }
    const std::string& name(int i) const { return basis_.at(static_cast<size_t>(i)).name; }
    int index_of(const std::string& name) const;

    /// Installs coeff * (output basis element) into mu^arity at the given
    /// input tuple. Checks the degree rule and, for arity 0, the curvature
    /// filtration condition.
    void set_op(int arity, const Tuple& inputs, int output, PowerSeries coeff);
    const std::map<Tuple, SparseCol>& ops(int arity) const;

    Element zero_element(int parity) const { return Element(cone_, trunc_, rank(), parity); }
    Element basis_element(int i) const;
    /// mu^0 as an element (zero when no curvature is installed).
    Element curvature() const;

    /// Multilinear evaluation of mu^{args.size()} on module elements.
    Element mu(const std::vector<Element>& args) const;

    /// Sum over k of mu^k(x, ..., x); finite because tensors above
    /// max_arity vanish. The Maurer-Cartan defect of x.
    Element insertion_defect(const Element& x) const;

private:
    friend CurvedAlgebra deform_impl(const CurvedAlgebra&, const Element&, bool);
    ConePtr cone_;
    int trunc_;
    std::vector<BasisGen> basis_;
    int max_arity_;
    std::vector<std::map<Tuple, SparseCol>> ops_;
};

struct RelationViolation {
    int arity = 0;
    Tuple inputs;
    std::string detail;
};

struct RelationReport {
    std::vector<RelationViolation> violations;
    int arity_checked = 0;
    bool ok() const { return violations.empty(); }
};

/// Exact check of the curved A-infinity equations up to the given arity,
/// on all basis input tuples, modulo the truncation ideal. Sign rule:
/// (-1)^(sum of reduced degrees strictly left of the inner mu), curvature
/// insertions included.
RelationReport check_curved_ainfty(const CurvedAlgebra& a, int arity_bound, int jobs = 1);

/// Reduction modulo the augmentation ideal: an algebra over the rank-0
/// cone keeping only valuation-0 coefficient parts. Uncurved.
CurvedAlgebra gr0(const CurvedAlgebra& a);

Element mc_defect(const CurvedAlgebra& a, const Element& x);
bool check_mc(const CurvedAlgebra& a, const Element& x);

/// The deformed algebra: mu_a^k obtained by inserting the Maurer-Cartan
/// candidate in all gaps. Requires odd parity and valuation >= 1.
CurvedAlgebra deform(const CurvedAlgebra& a, const Element& mc);

/// True iff the class of e acts as the identity on the integral
/// cohomology of the level-0 reduction, on both sides.
bool verify_cunit(const CurvedAlgebra& a, const Element& e);

/// Components of a curved filtered functor between two presented algebras:
/// tensors G^k with G^0 of valuation >= 1.
class FunctorData {
public:
    FunctorData(const CurvedAlgebra& domain, const CurvedAlgebra& codomain, int max_arity);
    void set_comp(int arity, const Tuple& inputs, int output, PowerSeries coeff);
    const std::map<Tuple, SparseCol>& comps(int arity) const;
    const CurvedAlgebra& domain() const { return *domain_; }
    const CurvedAlgebra& codomain() const { return *codomain_; }
    int max_arity() const { return max_arity_; }
    /// Checks the degree-(1-k) rule and the curvature condition on G^0.
    void validate() const;

private:
    const CurvedAlgebra* domain_;
    const CurvedAlgebra* codomain_;
    int max_arity_;
    std::vector<std::map<Tuple, SparseCol>> comps_;
};

/// Sum over k of G^k(x, ..., x) for a Maurer-Cartan element x.
Element pushforward_mc(const FunctorData& g, const Element& x);

/// A small curved filtered A-infinity category: named objects, free hom
/// modules, composition tensors indexed by object chains.
class CurvedCategory {
public:
    CurvedCategory(ConePtr cone, int trunc, std::vector<std::string> objects, int max_arity);

    int object_count() const { return static_cast<int>(objects_.size()); }
    const std::string& object(int i) const { return objects_.at(static_cast<size_t>(i)); }
    const ConePtr& cone() const { return cone_; }
    int trunc_order() const { return trunc_; }
    int max_arity() const { return max_arity_; }

    void set_hom_basis(int src, int dst, std::vector<BasisGen> basis);
    const std::vector<BasisGen>& hom_basis(int src, int dst) const;

    /// chain = (o_0, ..., o_k); inputs are basis indices of
    /// hom(o_0,o_1), ..., hom(o_{k-1},o_k); output indexes hom(o_0,o_k).
    void set_op(const std::vector<int>& chain, const Tuple& inputs, int output, PowerSeries coeff);
    const std::map<std::pair<std::vector<int>, Tuple>, SparseCol>& ops() const { return ops_; }

    /// The endomorphism algebra of one object, with all composition
    /// tensors of chains staying at that object.
    CurvedAlgebra endomorphism_algebra(int obj) const;

    RelationReport check_relations(int arity_bound) const;

    /// The curved relation sum for one object chain and one basis tuple.
    Element relation_sum_chain(const std::vector<int>& chain, const Tuple& inputs) const;

private:
    friend CurvedCategory bc_structure_maps(const CurvedCategory&, const std::vector<Element>&);
    ConePtr cone_;
    int trunc_;
    int max_arity_;
    std::vector<std::string> objects_;
    std::vector<std::vector<std::vector<BasisGen>>> hom_;
    std::map<std::pair<std::vector<int>, Tuple>, SparseCol> ops_;
};

/// Structure maps of the bounding-cochain category: hom spaces unchanged,
/// operations deformed by the per-object Maurer-Cartan elements. Each
/// assignment must satisfy the Maurer-Cartan equation in its endomorphism
/// algebra; the resulting per-object curvature vanishes.
CurvedCategory bc_structure_maps(const CurvedCategory& c, const std::vector<Element>& assignment);

int reduced_parity(int parity);

}  // namespace ainf
