#include "ainfcalc/ainfty.hpp"

#include "ainfcalc/intlinalg.hpp"
#include "ainfcalc/parallel.hpp"

#include <atomic>
#include <algorithm>
#include <mutex>
#include <sstream>

namespace ainf {

int reduced_parity(int parity) { return (parity + 1) & 1; }

Element::Element(ConePtr cone, int trunc, int rank, int parity)
    : cone_(std::move(cone)), trunc_(trunc), parity_(parity & 1) {
    coeffs_.reserve(static_cast<size_t>(rank));
    for (int i = 0; i < rank; ++i) coeffs_.emplace_back(cone_, trunc_);
}

void Element::set_coeff(int i, PowerSeries s) {
    if (!same_cone(cone_, s.cone())) throw InvariantError("element: cone mismatch");
    coeffs_.at(static_cast<size_t>(i)) = s.trunc_order() == trunc_ ? std::move(s) : s.truncated(trunc_);
}

void Element::add_coeff(int i, const PowerSeries& s) {
    coeffs_.at(static_cast<size_t>(i)) += s;
}

bool Element::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const PowerSeries& s) { return s.is_zero(); });
}

int Element::valuation() const {
    int best = kValuationInfinity;
    for (const auto& s : coeffs_) best = std::min(best, s.valuation());
    return best;
}

Element Element::operator+(const Element& rhs) const {
    if (parity_ != rhs.parity_ || rank() != rhs.rank())
        throw InvariantError("element: parity/rank mismatch in addition");
    Element out = *this;
    for (int i = 0; i < rank(); ++i) out.coeffs_[static_cast<size_t>(i)] += rhs.coeffs_[static_cast<size_t>(i)];
    return out;
}

Element Element::operator-(const Element& rhs) const {
    if (parity_ != rhs.parity_ || rank() != rhs.rank())
        throw InvariantError("element: parity/rank mismatch in subtraction");
    Element out = *this;
    for (int i = 0; i < rank(); ++i) out.coeffs_[static_cast<size_t>(i)] -= rhs.coeffs_[static_cast<size_t>(i)];
    return out;
}

Element Element::scaled(const Int& c) const {
    Element out = *this;
    for (auto& s : out.coeffs_) s = s.scaled(c);
    return out;
}

Element Element::scaled(const PowerSeries& s) const {
    Element out(cone_, std::min(trunc_, s.trunc_order()), rank(), parity_);
    for (int i = 0; i < rank(); ++i) out.set_coeff(i, coeffs_[static_cast<size_t>(i)] * s);
    return out;
}

bool Element::operator==(const Element& rhs) const {
    if (parity_ != rhs.parity_ || rank() != rhs.rank()) return false;
    for (int i = 0; i < rank(); ++i)
        if (coeffs_[static_cast<size_t>(i)] != rhs.coeffs_[static_cast<size_t>(i)]) return false;
    return true;
}

std::string Element::to_string(const std::vector<BasisGen>& basis) const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < rank(); ++i) {
        if (coeffs_[static_cast<size_t>(i)].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coeffs_[static_cast<size_t>(i)].to_string() << ")*" << basis.at(static_cast<size_t>(i)).name;
    }
    if (first) os << "0";
    return os.str();
}

CurvedAlgebra::CurvedAlgebra(ConePtr cone, int trunc, std::vector<BasisGen> basis, int max_arity)
    : cone_(std::move(cone)), trunc_(trunc), basis_(std::move(basis)), max_arity_(max_arity) {
    if (!cone_) throw InvariantError("algebra: null cone");
    if (trunc_ < 1) throw InvariantError("algebra: truncation order must be >= 1");
    if (max_arity_ < 0) throw InvariantError("algebra: negative arity cap");
    ops_.resize(static_cast<size_t>(max_arity_) + 1);
}

int CurvedAlgebra::index_of(const std::string& name) const {
    for (int i = 0; i < rank(); ++i)
        if (basis_[static_cast<size_t>(i)].name == name) return i;
    throw InvariantError("algebra: unknown basis name '" + name + "'");
}

void CurvedAlgebra::set_op(int arity, const Tuple& inputs, int output, PowerSeries coeff) {
    if (arity < 0 || arity > max_arity_) throw InvariantError("algebra: arity out of range");
    if (static_cast<int>(inputs.size()) != arity) throw InvariantError("algebra: tuple length != arity");
    for (int i : inputs)
        if (i < 0 || i >= rank()) throw InvariantError("algebra: input index out of range");
    if (output < 0 || output >= rank()) throw InvariantError("algebra: output index out of range");
    if (!same_cone(cone_, coeff.cone())) throw InvariantError("algebra: coefficient cone mismatch");
    int in_par = 0;
    for (int i : inputs) in_par += parity(i);
    if (((in_par + arity) & 1) != parity(output))
        throw InvariantError("algebra: degree rule violated (output parity != inputs + arity)");
    if (arity == 0 && coeff.valuation() < 1)
        throw InvariantError("algebra: curvature coefficient must have valuation >= 1");
    if (coeff.is_zero()) return;
    auto& col = ops_[static_cast<size_t>(arity)][inputs];
    auto it = col.find(output);
    if (it == col.end()) {
        col.emplace(output, coeff.trunc_order() == trunc_ ? std::move(coeff) : coeff.truncated(trunc_));
    } else {
        it->second += coeff;
        if (it->second.is_zero()) col.erase(it);
    }
    if (col.empty()) ops_[static_cast<size_t>(arity)].erase(inputs);
}

const std::map<Tuple, SparseCol>& CurvedAlgebra::ops(int arity) const {
    static const std::map<Tuple, SparseCol> empty;
    if (arity < 0 || arity > max_arity_) return empty;
    return ops_[static_cast<size_t>(arity)];
}

Element CurvedAlgebra::basis_element(int i) const {
    Element e(cone_, trunc_, rank(), parity(i));
    e.set_coeff(i, PowerSeries::constant(cone_, trunc_, 1));
    return e;
}

Element CurvedAlgebra::curvature() const {
    Element out = zero_element(0);
    auto it = ops(0).find(Tuple{});
    if (it != ops(0).end())
        for (const auto& [idx, s] : it->second) out.add_coeff(idx, s);
    return out;
}

Element CurvedAlgebra::mu(const std::vector<Element>& args) const {
    int k = static_cast<int>(args.size());
    int in_par = 0;
    for (const auto& a : args) {
        if (!same_cone(cone_, a.cone())) throw InvariantError("algebra: argument cone mismatch");
        if (a.rank() != rank()) throw InvariantError("algebra: argument rank mismatch");
        in_par += a.parity();
    }
    Element out = zero_element((in_par + k) & 1);
    if (k > max_arity_) return out;
    for (const auto& [tuple, col] : ops(k)) {
        PowerSeries factor = PowerSeries::constant(cone_, trunc_, 1);
        bool dead = false;
        for (int p = 0; p < k; ++p) {
            const PowerSeries& c = args[static_cast<size_t>(p)].coeff(tuple[static_cast<size_t>(p)]);
            if (c.is_zero()) { dead = true; break; }
            factor *= c;
            if (factor.is_zero()) { dead = true; break; }
        }
        if (dead) continue;
        for (const auto& [idx, s] : col) out.add_coeff(idx, s * factor);
    }
    return out;
}

Element CurvedAlgebra::insertion_defect(const Element& x) const {
    Element out = zero_element((x.parity() + 1) & 1);
    // parity of mu^k(x..x) = k*par + k = k(par+1); for odd x this is even
    // for every k, so the sum is homogeneous
    for (int k = 0; k <= max_arity_; ++k) {
        std::vector<Element> args(static_cast<size_t>(k), x);
        Element term = mu(args);
        if (!term.is_zero()) {
            if (term.parity() != out.parity())
                throw InvariantError("algebra: defect terms of mixed parity (element not odd?)");
            out = out + term;
        }
    }
    return out;
}

namespace {

// All basis tuples of the given length, in lexicographic order.
void for_each_tuple(int rank, int len, const std::function<void(const Tuple&)>& fn) {
    Tuple t(static_cast<size_t>(len), 0);
    if (len == 0) {
        fn(t);
        return;
    }
    if (rank == 0) return;
    while (true) {
        fn(t);
        int p = len - 1;
        while (p >= 0 && t[static_cast<size_t>(p)] == rank - 1) {
            t[static_cast<size_t>(p)] = 0;
            --p;
        }
        if (p < 0) break;
        ++t[static_cast<size_t>(p)];
    }
}

Element relation_sum(const CurvedAlgebra& a, const Tuple& inputs) {
    const int k = static_cast<int>(inputs.size());
    int total_par = 0;
    for (int i : inputs) total_par += a.parity(i);
    Element acc = a.zero_element((total_par + k + 1) & 1);
    // the relation output has degree (inputs) + k + 1: one mu of total
    // arity k+1-j+j with two degree shifts 2-j, 2-(k-j+1)
    for (int s = 0; s <= k; ++s) {
        int sign_exp = 0;
        for (int i = 0; i < s; ++i) sign_exp += reduced_parity(a.parity(inputs[static_cast<size_t>(i)]));
        for (int j = 0; s + j <= k; ++j) {
            if (j > a.max_arity()) continue;
            int outer_arity = k - j + 1;
            if (outer_arity > a.max_arity()) continue;
            Tuple inner_tuple(inputs.begin() + s, inputs.begin() + s + j);
            Element inner = a.zero_element(0);
            {
                std::vector<Element> inner_args;
                inner_args.reserve(static_cast<size_t>(j));
                for (int p = 0; p < j; ++p) inner_args.push_back(a.basis_element(inner_tuple[static_cast<size_t>(p)]));
                inner = a.mu(inner_args);
            }
            if (inner.is_zero()) continue;
            std::vector<Element> outer_args;
            outer_args.reserve(static_cast<size_t>(outer_arity));
            for (int i = 0; i < s; ++i) outer_args.push_back(a.basis_element(inputs[static_cast<size_t>(i)]));
            outer_args.push_back(inner);
            for (int i = s + j; i < k; ++i) outer_args.push_back(a.basis_element(inputs[static_cast<size_t>(i)]));
            Element term = a.mu(outer_args);
            if (term.is_zero()) continue;
            if (sign_exp & 1) term = term.scaled(Int(-1));
            acc = acc + term;
        }
    }
    return acc;
}

}  // namespace

RelationReport check_curved_ainfty(const CurvedAlgebra& a, int arity_bound, int jobs) {
    if (arity_bound > a.max_arity())
        throw InvariantError("relation check: arity bound exceeds stored arity cap");
    RelationReport report;
    report.arity_checked = arity_bound;
    std::mutex mu;
    for (int k = 0; k <= arity_bound; ++k) {
        std::vector<Tuple> tuples;
        for_each_tuple(a.rank(), k, [&](const Tuple& t) { tuples.push_back(t); });
        parallel_for(jobs, static_cast<int>(tuples.size()), [&](int i) {
            Element r = relation_sum(a, tuples[static_cast<size_t>(i)]);
            if (!r.is_zero()) {
                std::lock_guard<std::mutex> lock(mu);
                report.violations.push_back(
                    {k, tuples[static_cast<size_t>(i)], r.to_string(a.basis())});
            }
        });
    }
    std::sort(report.violations.begin(), report.violations.end(),
              [](const RelationViolation& x, const RelationViolation& y) {
                  return std::tie(x.arity, x.inputs) < std::tie(y.arity, y.inputs);
              });
    return report;
}

CurvedAlgebra gr0(const CurvedAlgebra& a) {
    ConePtr triv = Cone::trivial();
    CurvedAlgebra out(triv, 1, a.basis(), a.max_arity());
    for (int k = 1; k <= a.max_arity(); ++k) {
        for (const auto& [tuple, col] : a.ops(k)) {
            for (const auto& [idx, s] : col) {
                Int c = s.constant_term();
                if (c == 0) continue;
                out.set_op(k, tuple, idx, PowerSeries::constant(triv, 1, c));
            }
        }
    }
    // curvature has valuation >= 1, so its reduction is zero
    return out;
}

Element mc_defect(const CurvedAlgebra& a, const Element& x) {
    if (x.parity() != 1) throw InvariantError("maurer-cartan: element must be odd");
    if (!x.is_zero() && x.valuation() < 1)
        throw InvariantError("maurer-cartan: element must have valuation >= 1");
    return a.insertion_defect(x);
}

bool check_mc(const CurvedAlgebra& a, const Element& x) { return mc_defect(a, x).is_zero(); }

CurvedAlgebra deform_impl(const CurvedAlgebra& a, const Element& mc, bool allow_val0) {
    if (mc.parity() != 1) throw InvariantError("deform: element must be odd");
    if (!allow_val0 && !mc.is_zero() && mc.valuation() < 1)
        throw InvariantError("deform: element must have valuation >= 1");
    if (mc.rank() != a.rank()) throw InvariantError("deform: rank mismatch");
    PowerSeries one = PowerSeries::constant(a.cone(), a.trunc_order(), 1);
    // accumulate first: individual contributions to the deformed curvature
    // may only cancel in the net sum
    std::vector<std::map<Tuple, SparseCol>> acc(static_cast<size_t>(a.max_arity()) + 1);
    for (int k = 0; k <= a.max_arity(); ++k) {
        for (const auto& [tuple, col] : a.ops(k)) {
            // every subset of positions can absorb a copy of mc
            for (unsigned mask = 0; mask < (1u << k); ++mask) {
                PowerSeries factor = one;
                bool dead = false;
                Tuple reduced;
                reduced.reserve(static_cast<size_t>(k));
                for (int p = 0; p < k; ++p) {
                    if (mask & (1u << p)) {
                        const PowerSeries& c = mc.coeff(tuple[static_cast<size_t>(p)]);
                        if (c.is_zero()) { dead = true; break; }
                        factor *= c;
                        if (factor.is_zero()) { dead = true; break; }
                    } else {
                        reduced.push_back(tuple[static_cast<size_t>(p)]);
                    }
                }
                if (dead) continue;
                auto& target = acc[reduced.size()][reduced];
                for (const auto& [idx, s] : col) {
                    PowerSeries c = s * factor;
                    if (c.is_zero()) continue;
                    auto it = target.find(idx);
                    if (it == target.end()) target.emplace(idx, std::move(c));
                    else {
                        it->second += c;
                        if (it->second.is_zero()) target.erase(it);
                    }
                }
            }
        }
    }
    CurvedAlgebra out(a.cone(), a.trunc_order(), a.basis(), a.max_arity());
    for (int k = 0; k <= a.max_arity(); ++k)
        for (const auto& [tuple, col] : acc[static_cast<size_t>(k)])
            for (const auto& [idx, s] : col) out.set_op(k, tuple, idx, s);
    return out;
}

CurvedAlgebra deform(const CurvedAlgebra& a, const Element& mc) {
    return deform_impl(a, mc, false);
}

namespace {

struct ParitySplit {
    std::vector<int> even_idx;
    std::vector<int> odd_idx;
    std::vector<int> pos;  // basis index -> position within its class
};

ParitySplit split_basis(const CurvedAlgebra& a) {
    ParitySplit s;
    s.pos.resize(static_cast<size_t>(a.rank()), -1);
    for (int i = 0; i < a.rank(); ++i) {
        if (a.parity(i) == 0) {
            s.pos[static_cast<size_t>(i)] = static_cast<int>(s.even_idx.size());
            s.even_idx.push_back(i);
        } else {
            s.pos[static_cast<size_t>(i)] = static_cast<int>(s.odd_idx.size());
            s.odd_idx.push_back(i);
        }
    }
    return s;
}

IntVec constant_vector(const Element& e, const std::vector<int>& idx) {
    IntVec v(static_cast<Eigen::Index>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) v[static_cast<Eigen::Index>(i)] = e.coeff(idx[i]).constant_term();
    return v;
}

}  // namespace

bool verify_cunit(const CurvedAlgebra& a, const Element& e) {
    if (e.parity() != 0) throw InvariantError("c-unit: candidate must be even");
    CurvedAlgebra g = gr0(a);
    ParitySplit sp = split_basis(g);
    const auto ne = static_cast<Eigen::Index>(sp.even_idx.size());
    const auto no = static_cast<Eigen::Index>(sp.odd_idx.size());

    IntMat d_even(no, ne), d_odd(ne, no);
    for (Eigen::Index j = 0; j < ne; ++j) {
        Element im = g.mu({g.basis_element(sp.even_idx[static_cast<size_t>(j)])});
        IntVec v = constant_vector(im, sp.odd_idx);
        for (Eigen::Index i = 0; i < no; ++i) d_even(i, j) = v[i];
    }
    for (Eigen::Index j = 0; j < no; ++j) {
        Element im = g.mu({g.basis_element(sp.odd_idx[static_cast<size_t>(j)])});
        IntVec v = constant_vector(im, sp.even_idx);
        for (Eigen::Index i = 0; i < ne; ++i) d_odd(i, j) = v[i];
    }
    IntComplex cx(ne, no, d_even, d_odd);  // validates d*d = 0

    // e itself must be a cocycle at level 0
    Element e0 = g.zero_element(0);
    for (int i = 0; i < g.rank(); ++i) {
        Int c = e.coeff(i).constant_term();
        if (c != 0) e0.add_coeff(i, PowerSeries::constant(g.cone(), 1, c));
    }
    if (!g.mu({e0}).is_zero()) return false;

    // identity action on a generating set of integral cohomology classes
    for (int par = 0; par <= 1; ++par) {
        const auto& idx = par == 0 ? sp.even_idx : sp.odd_idx;
        const IntMat& d_here = par == 0 ? d_even : d_odd;
        const IntMat& d_opp = par == 0 ? d_odd : d_even;
        IntMat kb = kernel_basis(d_here);
        for (Eigen::Index c = 0; c < kb.cols(); ++c) {
            Element x = g.zero_element(par);
            for (Eigen::Index i = 0; i < kb.rows(); ++i) {
                if (kb(i, c) != 0)
                    x.add_coeff(idx[static_cast<size_t>(i)],
                                PowerSeries::constant(g.cone(), 1, kb(i, c)));
            }
            for (bool left : {true, false}) {
                Element prod = left ? g.mu({e0, x}) : g.mu({x, e0});
                Element diff = prod - x;
                if (diff.is_zero()) continue;
                IntVec rhs = constant_vector(diff, idx);
                if (!solve_integer(d_opp, rhs).has_value()) return false;
            }
        }
    }
    return true;
}

FunctorData::FunctorData(const CurvedAlgebra& domain, const CurvedAlgebra& codomain, int max_arity)
    : domain_(&domain), codomain_(&codomain), max_arity_(max_arity) {
    if (!same_cone(domain.cone(), codomain.cone()))
        throw InvariantError("functor: cone mismatch");
    comps_.resize(static_cast<size_t>(max_arity_) + 1);
}

void FunctorData::set_comp(int arity, const Tuple& inputs, int output, PowerSeries coeff) {
    if (arity < 0 || arity > max_arity_) throw InvariantError("functor: arity out of range");
    if (static_cast<int>(inputs.size()) != arity) throw InvariantError("functor: tuple length != arity");
    int in_par = 0;
    for (int i : inputs) {
        if (i < 0 || i >= domain_->rank()) throw InvariantError("functor: input index out of range");
        in_par += domain_->parity(i);
    }
    if (output < 0 || output >= codomain_->rank()) throw InvariantError("functor: output index out of range");
    // G^k has degree 1-k
    if (((in_par + arity + 1) & 1) != codomain_->parity(output))
        throw InvariantError("functor: degree rule violated");
    if (arity == 0 && coeff.valuation() < 1)
        throw InvariantError("functor: curvature component must have valuation >= 1");
    if (coeff.is_zero()) return;
    auto& col = comps_[static_cast<size_t>(arity)][inputs];
    auto it = col.find(output);
    if (it == col.end()) col.emplace(output, std::move(coeff));
    else {
        it->second += coeff;
        if (it->second.is_zero()) col.erase(it);
    }
}

const std::map<Tuple, SparseCol>& FunctorData::comps(int arity) const {
    static const std::map<Tuple, SparseCol> empty;
    if (arity < 0 || arity > max_arity_) return empty;
    return comps_[static_cast<size_t>(arity)];
}

void FunctorData::validate() const {
    auto it = comps(0).find(Tuple{});
    if (it != comps(0).end())
        for (const auto& [idx, s] : it->second)
            if (s.valuation() < 1)
                throw InvariantError("functor: curvature component must have valuation >= 1");
}

Element pushforward_mc(const FunctorData& g, const Element& x) {
    if (x.parity() != 1) throw InvariantError("pushforward: element must be odd");
    if (!x.is_zero() && x.valuation() < 1)
        throw InvariantError("pushforward: element must have valuation >= 1");
    g.validate();
    const CurvedAlgebra& cod = g.codomain();
    Element out = cod.zero_element(1);
    for (int k = 0; k <= g.max_arity(); ++k) {
        for (const auto& [tuple, col] : g.comps(k)) {
            PowerSeries factor = PowerSeries::constant(cod.cone(), cod.trunc_order(), 1);
            bool dead = false;
            for (int p = 0; p < k; ++p) {
                const PowerSeries& c = x.coeff(tuple[static_cast<size_t>(p)]);
                if (c.is_zero()) { dead = true; break; }
                factor *= c;
                if (factor.is_zero()) { dead = true; break; }
            }
            if (dead) continue;
            for (const auto& [idx, s] : col) out.add_coeff(idx, s * factor);
        }
    }
    return out;
}

CurvedCategory::CurvedCategory(ConePtr cone, int trunc, std::vector<std::string> objects, int max_arity)
    : cone_(std::move(cone)), trunc_(trunc), max_arity_(max_arity), objects_(std::move(objects)) {
    if (objects_.empty()) throw InvariantError("category: needs at least one object");
    hom_.resize(objects_.size(), std::vector<std::vector<BasisGen>>(objects_.size()));
}

void CurvedCategory::set_hom_basis(int src, int dst, std::vector<BasisGen> basis) {
    hom_.at(static_cast<size_t>(src)).at(static_cast<size_t>(dst)) = std::move(basis);
}

const std::vector<BasisGen>& CurvedCategory::hom_basis(int src, int dst) const {
    return hom_.at(static_cast<size_t>(src)).at(static_cast<size_t>(dst));
}

void CurvedCategory::set_op(const std::vector<int>& chain, const Tuple& inputs, int output,
                            PowerSeries coeff) {
    if (chain.empty()) throw InvariantError("category: empty object chain");
    int k = static_cast<int>(chain.size()) - 1;
    if (k > max_arity_) throw InvariantError("category: arity above cap");
    if (static_cast<int>(inputs.size()) != k) throw InvariantError("category: tuple length mismatch");
    int in_par = 0;
    for (int p = 0; p < k; ++p) {
        const auto& basis = hom_basis(chain[static_cast<size_t>(p)], chain[static_cast<size_t>(p + 1)]);
        int i = inputs[static_cast<size_t>(p)];
        if (i < 0 || i >= static_cast<int>(basis.size()))
            throw InvariantError("category: input index out of range");
        in_par += basis[static_cast<size_t>(i)].parity;
    }
    const auto& out_basis = hom_basis(chain.front(), chain.back());
    if (output < 0 || output >= static_cast<int>(out_basis.size()))
        throw InvariantError("category: output index out of range");
    if (((in_par + k) & 1) != out_basis[static_cast<size_t>(output)].parity)
        throw InvariantError("category: degree rule violated");
    if (k == 0 && coeff.valuation() < 1)
        throw InvariantError("category: curvature must have valuation >= 1");
    if (coeff.is_zero()) return;
    auto key = std::make_pair(chain, inputs);
    auto& col = ops_[key];
    auto it = col.find(output);
    if (it == col.end()) col.emplace(output, std::move(coeff));
    else {
        it->second += coeff;
        if (it->second.is_zero()) col.erase(it);
    }
    if (col.empty()) ops_.erase(key);
}

CurvedAlgebra CurvedCategory::endomorphism_algebra(int obj) const {
    CurvedAlgebra a(cone_, trunc_, hom_basis(obj, obj), max_arity_);
    for (const auto& [key, col] : ops_) {
        const auto& [chain, inputs] = key;
        bool at_obj = std::all_of(chain.begin(), chain.end(), [&](int o) { return o == obj; });
        if (!at_obj) continue;
        for (const auto& [idx, s] : col)
            a.set_op(static_cast<int>(chain.size()) - 1, inputs, idx, s);
    }
    return a;
}

RelationReport CurvedCategory::check_relations(int arity_bound) const {
    RelationReport report;
    report.arity_checked = arity_bound;
    // straightforward recursion over chains and tuples; categories in this
    // artifact are tiny, so no parallel split here
    std::function<void(std::vector<int>&, int)> visit_chain = [&](std::vector<int>& chain, int k) {
        if (static_cast<int>(chain.size()) == k + 1) {
            // enumerate basis tuples along the chain
            std::vector<int> sizes(static_cast<size_t>(k));
            for (int p = 0; p < k; ++p)
                sizes[static_cast<size_t>(p)] = static_cast<int>(
                    hom_basis(chain[static_cast<size_t>(p)], chain[static_cast<size_t>(p + 1)]).size());
            Tuple t(static_cast<size_t>(k), 0);
            bool any_empty = std::any_of(sizes.begin(), sizes.end(), [](int s) { return s == 0; });
            if (k > 0 && any_empty) return;
            while (true) {
                Element r = relation_sum_chain(chain, t);
                if (!r.is_zero()) {
                    std::ostringstream os;
                    os << "chain";
                    for (int o : chain) os << " " << o;
                    report.violations.push_back({k, t, os.str()});
                }
                if (k == 0) break;
                int p = k - 1;
                while (p >= 0 && t[static_cast<size_t>(p)] == sizes[static_cast<size_t>(p)] - 1) {
                    t[static_cast<size_t>(p)] = 0;
                    --p;
                }
                if (p < 0) break;
                ++t[static_cast<size_t>(p)];
            }
            return;
        }
        for (int o = 0; o < object_count(); ++o) {
            chain.push_back(o);
            visit_chain(chain, k);
            chain.pop_back();
        }
    };
    for (int k = 0; k <= arity_bound; ++k) {
        std::vector<int> chain;
        visit_chain(chain, k);
    }
    return report;
}

Element CurvedCategory::relation_sum_chain(const std::vector<int>& chain, const Tuple& inputs) const {
    const int k = static_cast<int>(chain.size()) - 1;
    const auto& out_basis = hom_basis(chain.front(), chain.back());
    int total_par = 0;
    for (int p = 0; p < k; ++p)
        total_par += hom_basis(chain[static_cast<size_t>(p)], chain[static_cast<size_t>(p + 1)])
                         [static_cast<size_t>(inputs[static_cast<size_t>(p)])].parity;
    Element acc(cone_, trunc_, static_cast<int>(out_basis.size()), (total_par + k + 1) & 1);
    for (int s = 0; s <= k; ++s) {
        int sign_exp = 0;
        for (int i = 0; i < s; ++i)
            sign_exp += reduced_parity(
                hom_basis(chain[static_cast<size_t>(i)], chain[static_cast<size_t>(i + 1)])
                    [static_cast<size_t>(inputs[static_cast<size_t>(i)])].parity);
        for (int j = 0; s + j <= k; ++j) {
            int outer_arity = k - j + 1;
            if (j > max_arity_ || outer_arity > max_arity_) continue;
            // inner chain: objects s..s+j; inner output in hom(chain[s], chain[s+j])
            std::vector<int> inner_chain(chain.begin() + s, chain.begin() + s + j + 1);
            Tuple inner_tuple(inputs.begin() + s, inputs.begin() + s + j);
            auto inner_it = ops_.find(std::make_pair(inner_chain, inner_tuple));
            if (inner_it == ops_.end()) continue;
            // outer chain: the consumed segment collapses to the slot
            // between its endpoints o_s and o_{s+j}
            std::vector<int> outer_chain;
            outer_chain.insert(outer_chain.end(), chain.begin(), chain.begin() + s + 1);
            outer_chain.insert(outer_chain.end(), chain.begin() + s + j, chain.end());
            for (const auto& [mid_idx, mid_coeff] : inner_it->second) {
                // outer inputs: original before, mid, original after
                Tuple outer_inputs;
                outer_inputs.reserve(static_cast<size_t>(outer_arity));
                for (int i = 0; i < s; ++i) outer_inputs.push_back(inputs[static_cast<size_t>(i)]);
                outer_inputs.push_back(mid_idx);
                for (int i = s + j; i < k; ++i) outer_inputs.push_back(inputs[static_cast<size_t>(i)]);
                auto outer_it = ops_.find(std::make_pair(outer_chain, outer_inputs));
                if (outer_it == ops_.end()) continue;
                for (const auto& [out_idx, out_coeff] : outer_it->second) {
                    PowerSeries c = out_coeff * mid_coeff;
                    if (sign_exp & 1) c = c.scaled(Int(-1));
                    PowerSeries cur = acc.coeff(out_idx);
                    acc.set_coeff(out_idx, cur + c);
                }
            }
        }
    }
    return acc;
}

CurvedCategory bc_structure_maps(const CurvedCategory& c, const std::vector<Element>& assignment) {
    if (static_cast<int>(assignment.size()) != c.object_count())
        throw InvariantError("bc: one Maurer-Cartan element per object required");
    for (int o = 0; o < c.object_count(); ++o) {
        CurvedAlgebra endo = c.endomorphism_algebra(o);
        if (!check_mc(endo, assignment[static_cast<size_t>(o)]))
            throw InvariantError("bc: assignment at object '" + c.object(o) +
                                 "' fails the Maurer-Cartan equation");
    }
    CurvedCategory out(c.cone(), c.trunc_order(), c.objects_, c.max_arity());
    out.hom_ = c.hom_;
    PowerSeries one = PowerSeries::constant(c.cone(), c.trunc_order(), 1);
    for (const auto& [key, col] : c.ops_) {
        const auto& [chain, inputs] = key;
        const int k = static_cast<int>(chain.size()) - 1;
        // positions eligible for absorption: equal endpoints
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            PowerSeries factor = one;
            bool dead = false;
            Tuple reduced;
            std::vector<int> red_chain;
            red_chain.push_back(chain[0]);
            for (int p = 0; p < k; ++p) {
                int src = chain[static_cast<size_t>(p)], dst = chain[static_cast<size_t>(p + 1)];
                if (mask & (1u << p)) {
                    if (src != dst) { dead = true; break; }
                    const PowerSeries& cc =
                        assignment[static_cast<size_t>(src)].coeff(inputs[static_cast<size_t>(p)]);
                    if (cc.is_zero()) { dead = true; break; }
                    factor *= cc;
                    if (factor.is_zero()) { dead = true; break; }
                } else {
                    reduced.push_back(inputs[static_cast<size_t>(p)]);
                    red_chain.push_back(dst);
                }
            }
            if (dead) continue;
            for (const auto& [idx, s] : col) {
                PowerSeries cc = s * factor;
                if (cc.is_zero()) continue;
                out.set_op(red_chain, reduced, idx, cc);
            }
        }
    }
    // deformed curvature must vanish at every object
    for (int o = 0; o < out.object_count(); ++o) {
        auto it = out.ops_.find(std::make_pair(std::vector<int>{o}, Tuple{}));
        if (it != out.ops_.end() && !it->second.empty())
            throw InvariantError("bc: deformed curvature nonzero at object '" + out.object(o) + "'");
    }
    return out;
}

}  // namespace ainf
