#pragma once

#include "ainfcalc/cone.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ainf {

using DivisorSet = std::uint32_t;  // bitmask over the divisor index set

inline int popcount(DivisorSet s) { return __builtin_popcount(s); }

/// Numerical geometry backing the dimension formulas: abstract spherical
/// classes with first Chern numbers and intersection vectors against a
/// finite divisor set; no homology is computed.
struct GeometrySpec {
    struct ClassEntry {
        std::string name;
        long long c1 = 0;                  // c_1(TX) paired with the class
        std::vector<Coord> intersections;  // against each divisor, >= 0
        std::vector<DivisorSet> admissible;  // allowed containment sets
    };

    int n = 0;  // complex dimension
    std::vector<std::string> divisors;
    std::vector<ClassEntry> classes;
    std::optional<DivisorSet> q0;  // distinguished sub-divisor-set
    // weight matrix taking intersection vectors to cone exponents
    std::optional<std::vector<std::vector<Coord>>> divisor_weights;
    ConePtr cone;  // optional; required for monomial weights

    int q_count() const { return static_cast<int>(divisors.size()); }
    const ClassEntry& cls(int id) const { return classes.at(static_cast<size_t>(id)); }
    void validate() const;
    int class_index(const std::string& name) const;
};

/// Decorated tree type of a stable sphere configuration: tree shape,
/// marking distribution, per-vertex divisor containment and class label
/// (-1 for the zero class).
struct CombinatorialType {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;  // undirected, first < second
    std::vector<int> marking;                // marked point -> vertex
    std::vector<DivisorSet> containment;     // K_alpha per vertex
    std::vector<int> cls;                    // class id per vertex, -1 = zero

    int marking_count() const { return static_cast<int>(marking.size()); }
    std::string encode() const;  // canonical text form, also the sort key
};

/// c_1 of the tangent bundle of the divisor stratum cut out by K, against
/// a class admissible for K (the adjunction value). Class id -1 gives 0.
long long c1_subvariety(const GeometrySpec& geom, int cls_id, DivisorSet K);

/// Validity of a decorated tree: tree shape, markings in range,
/// admissibility of classes, stability of zero-class vertices.
void validate_type(const GeometrySpec& geom, const CombinatorialType& t);

/// Both expressions of the stratum dimension formula; they must agree
/// (their difference detects a broken tree invariant).
long long dim_gamma(const GeometrySpec& geom, const CombinatorialType& t, int k);

/// 2(k + n + c1(total) - 3 - #edges - max |K|).
long long dim_upper_bound(const GeometrySpec& geom, const CombinatorialType& t, int k);

struct ClassBudget {
    std::vector<int> counts;  // available copies per class-table entry
};

/// Every stable decorated tree with at most max_vertices vertices, class
/// multiset within the budget, and markings 1..k distributed over the
/// vertices; deterministic canonical order, each type exactly once.
/// Zero-class vertices carry empty containment.
std::vector<CombinatorialType> enumerate_types(const GeometrySpec& geom, int k,
                                               const ClassBudget& budget, int max_vertices);

/// Expected dimension of a disc moduli problem with index iA and k+1
/// boundary punctures.
long long disc_dim(long long iA, int k);

/// Tangency data at interior marked points: each row is the vector of
/// local intersection multiplicities with the divisors.
struct TangencyData {
    std::vector<std::vector<Coord>> rows;  // one per marked point
    int ell() const { return static_cast<int>(rows.size()); }
};

/// The all-multiplicity-one tangency data for a class: one point per unit
/// of intersection, assigned by q_assignment.
TangencyData canonical_tangency(const GeometrySpec& geom, int cls_id,
                                const std::vector<int>& q_assignment);

/// Order of the symmetry group preserving a point-to-divisor assignment:
/// the product of factorials of the intersection numbers.
Int sym_q_order(const GeometrySpec& geom, int cls_id);

/// The cone exponent attached to a class via the divisor weight matrix;
/// checked to land in the dual monoid.
LatticeVec monomial_weight(const GeometrySpec& geom, int cls_id);

struct BubbleAttachment {
    CombinatorialType tree;   // one marked point
    DivisorSet marked_K = 0;  // containment set of the marked component
    std::vector<int> sphere_classes() const;
};

/// Dimension of a disc with tangency data and bubble trees attached:
/// disc_dim + 2 ell - 2 sum |t(i)| + sum over bubbles of
/// (dim(tree) - 2n + 2 |K_i meet K'_i|). iA0 is the index of the bare
/// disc class (after splitting off the bubbles).
long long bubble_config_dim(const GeometrySpec& geom, long long iA0, int k,
                            const TangencyData& t,
                            const std::vector<std::pair<int, BubbleAttachment>>& bubbles);

struct ExclusionConfig {
    TangencyData tangency;
    std::vector<std::pair<int, BubbleAttachment>> bubbles;  // point index -> tree
    std::vector<int> disc_class_multiset;  // budget entries folded into the disc
    long long dim = 0;
    bool survivor = false;
    bool canonical_no_bubble = false;
    std::string encode() const;
};

struct ExclusionReport {
    long long disc_dim = 0;
    std::vector<ExclusionConfig> configs;  // canonical order
    bool exclusion_holds = false;  // survivors are exactly the canonical no-bubble ones
};

/// Exhaustive dimension audit of all configurations within the budget:
/// the total class is the budget sum with index iA; a configuration
/// chooses bubble classes (grouped into one-marked-point stable trees
/// attached at points of I), tangency data for the remaining disc class,
/// with I containing every zero-tangency point. Requires disc_dim <= 1.
ExclusionReport sphere_exclusion(const GeometrySpec& geom, long long iA, int k,
                                 const ClassBudget& budget, int max_bubble_vertices = 2);

/// Dimension shift of the forgetful comparison: 2*ell_for minus twice the
/// total tangency mass outside the distinguished sub-divisor-set. The
/// last ell_for rows must be supported outside it.
long long forgetful_dim_diff(const GeometrySpec& geom, int ell_for, const TangencyData& t);

}  // namespace ainf
