#pragma once

#include "ainfcalc/triangle.hpp"

#include <optional>

namespace ainf {

struct TransferOrderLog {
    int order = 0;
    int monomial_count = 0;  // distinct exponents carrying obstruction terms
    bool solved = false;
    std::string note;
};

struct TransferResult {
    Element a;  // odd element of the left algebra, valuation >= 1
    Element m;  // even module element, congruent to the seed at level 0
    int order_achieved = 0;
    std::vector<TransferOrderLog> log;

    // unit transport, filled when an e_b candidate was supplied
    bool cunit_requested = false;
    bool cunit_lifted = false;
    bool cunit_verified = false;
    std::optional<Element> e_a;
};

struct TransferOptions {
    /// Working order; capped by the ring truncation.
    int order = 0;
    /// Unit representative of the right algebra to transport, if any.
    std::optional<Element> e_b;
    /// Reject m0 that is not an integral quasi-isomorphism up front
    /// instead of running into the obstruction.
    bool precheck_quasi_iso = false;
};

/// Order-by-order solution of the Maurer-Cartan equation for the
/// lower-triangular element a + m + b of the triangle algebra, given the
/// right-hand solution b and the level-0 comparison element m0. Each
/// order reduces to independent integer linear systems, one per exponent
/// monomial, over the level-0 kernel complex of the projection to B.
///
/// Throws InvariantError when the inputs break the method's hypotheses
/// (b not Maurer-Cartan at the reached order, obstruction not closed) and
/// ObstructionError when an integer system has no solution.
TransferResult transfer_mc(const TriangleAlgebra& t, const Element& m0, const Element& b,
                           const TransferOptions& options);

/// Convenience wrapper assembling the triangle.
TransferResult transfer_mc(const CurvedAlgebra& a, const CurvedAlgebra& b_alg, const Bimodule& m,
                           const Element& m0, const Element& b, int order);

/// Direct-substitution verification of a transfer output: the full defect
/// of a + m + b in the triangle vanishes modulo the truncation ideal.
bool verify_transfer(const TriangleAlgebra& t, const Element& a, const Element& m,
                     const Element& b);

}  // namespace ainf
