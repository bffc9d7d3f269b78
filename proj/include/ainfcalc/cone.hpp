#pragma once

#include "ainfcalc/basics.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace ainf {

/// A rational polyhedral cone given by integer generators (denominators
/// cleared at construction), together with arithmetic on the dual monoid
/// of lattice points with nonnegative pairings against every generator.
///
/// The generator matrix must have full rank equal to the ambient dimension;
/// this makes the pairing map injective, so every dual lattice point has
/// finitely many decompositions and the adic order is well defined.
class Cone {
public:
    Cone(int ambient_dim, std::vector<LatticeVec> generators,
         std::optional<std::vector<Rat>> ample = std::nullopt,
         std::optional<std::vector<Rat>> anticanonical = std::nullopt);

    /// The rank-0 cone: ambient dimension 0, dual monoid {0}. Used as the
    /// coefficient cone of associated-graded (level-0) algebras.
    static std::shared_ptr<const Cone> trivial();

    int ambient_dim() const { return ambient_dim_; }
    int generator_count() const { return static_cast<int>(generators_.size()); }
    const LatticeVec& generator(int i) const { return generators_.at(static_cast<size_t>(i)); }
    const std::optional<std::vector<Rat>>& ample_tag() const { return ample_; }
    const std::optional<std::vector<Rat>>& anticanonical_tag() const { return anticanonical_; }

    bool same_as(const Cone& other) const;

    /// Membership of v in the dual monoid: all pairings nonnegative.
    bool contains(const LatticeVec& v) const;

    /// The pairing vector (<v, delta_i>)_i.
    std::vector<Coord> pairings(const LatticeVec& v) const;

    /// All dual lattice points gamma with alpha - gamma also in the dual
    /// monoid, in lexicographic order. Finite by the rank invariant.
    std::vector<LatticeVec> below(const LatticeVec& alpha) const;

    /// Adic order: the largest k such that alpha splits as a sum of k
    /// nonzero dual lattice points; ord(0) = 0. Memoized.
    int ord(const LatticeVec& alpha) const;

    /// All ordered tuples (alpha_1, ..., alpha_parts) of dual lattice points
    /// summing to alpha, lexicographically ordered.
    std::vector<std::vector<LatticeVec>> decompositions(const LatticeVec& alpha, int parts) const;

    /// Primitive integer generators of the extreme rays of the dual monoid's
    /// real cone. Small ambient dimensions only (facet enumeration).
    std::vector<LatticeVec> dual_rays() const;

    LatticeVec zero() const { return LatticeVec::Zero(ambient_dim_); }

private:
    void check_vector(const LatticeVec& v) const;
    int ord_unlocked(const LatticeVec& alpha, std::map<LatticeVec, int, LexLess>& memo) const;

    int ambient_dim_;
    std::vector<LatticeVec> generators_;
    std::optional<std::vector<Rat>> ample_;
    std::optional<std::vector<Rat>> anticanonical_;

    // rows of an invertible ambient_dim x ambient_dim generator submatrix,
    // used to bound coordinate boxes for lattice enumeration
    std::vector<int> basis_rows_;
    std::vector<std::vector<Rat>> basis_inverse_;  // inverse of that submatrix

    mutable std::mutex memo_mutex_;
    mutable std::map<LatticeVec, int, LexLess> ord_memo_;
};

using ConePtr = std::shared_ptr<const Cone>;

inline bool same_cone(const ConePtr& a, const ConePtr& b) {
    return a.get() == b.get() || a->same_as(*b);
}

}  // namespace ainf
