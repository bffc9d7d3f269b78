#pragma once

#include "ainfcalc/basics.hpp"

#include <optional>
#include <vector>

namespace ainf {

struct SnfResult {
    IntMat u;  // unimodular, rows
    IntMat d;  // diagonal, d_1 | d_2 | ...
    IntMat v;  // unimodular, cols
    int rank = 0;
};

/// Smith normal form with U * m * V = D, U and V unimodular, nonnegative
/// diagonal with successive divisibility. Pivot selection: smallest
/// absolute value, then lowest index. The identity is re-verified by exact
/// multiplication in debug builds.
SnfResult smith_normal_form(const IntMat& m);

/// A particular integer solution of m * x = b, or nullopt when unsolvable.
/// Free parameters are set to zero (deterministic).
std::optional<IntVec> solve_integer(const IntMat& m, const IntVec& b);

/// Basis of the integer kernel lattice, as matrix columns (saturated).
IntMat kernel_basis(const IntMat& m);

/// A two-periodic complex of free abelian groups. d_even maps the even
/// piece to the odd piece and vice versa; both composites must vanish.
struct IntComplex {
    Eigen::Index even_rank = 0;
    Eigen::Index odd_rank = 0;
    IntMat d_even;  // odd_rank x even_rank
    IntMat d_odd;   // even_rank x odd_rank

    IntComplex(Eigen::Index even, Eigen::Index odd, IntMat de, IntMat dodd);
    static IntComplex zero(Eigen::Index even, Eigen::Index odd);
};

struct HomologyPart {
    long free_rank = 0;
    std::vector<Int> torsion;  // invariant factors >= 2, each dividing the next
    bool trivial() const { return free_rank == 0 && torsion.empty(); }
};

struct Homology {
    HomologyPart even;
    HomologyPart odd;
};

Homology homology(const IntComplex& c);
bool is_acyclic(const IntComplex& c);

/// Mapping cone of a map g between two-periodic complexes. g must satisfy
/// d_Y g = -g d_X parity-wise (as the degree-one maps produced by pairing
/// a closed element into a product do); the constructor's d*d check guards
/// the convention.
IntComplex mapping_cone(const IntComplex& x, const IntComplex& y,
                        const IntMat& g_even /* X_even -> Y_even */,
                        const IntMat& g_odd /* X_odd -> Y_odd */);

std::string to_string(const IntMat& m);

}  // namespace ainf
