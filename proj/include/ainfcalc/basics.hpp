#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ainf {

using Int = mpz_class;
using Rat = mpq_class;

// Lattice coordinates are small; exact big integers are only needed for
// series coefficients and matrix entries.
using Coord = long;
using LatticeVec = Eigen::Matrix<Coord, Eigen::Dynamic, 1>;

using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A domain-type invariant or operation precondition does not hold.
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The transfer solver hit an unsolvable obstruction (data, not a bug).
struct ObstructionError : std::runtime_error {
    explicit ObstructionError(const std::string& msg, int order = -1)
        : std::runtime_error(msg), order(order) {}
    int order;
};

inline constexpr int kValuationInfinity = std::numeric_limits<int>::max();

struct LexLess {
    bool operator()(const LatticeVec& a, const LatticeVec& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    }
};

inline LatticeVec to_lattice_vec(const std::vector<Coord>& v) {
    LatticeVec out(static_cast<Eigen::Index>(v.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = v[static_cast<size_t>(i)];
    return out;
}

inline std::vector<Coord> to_std_vec(const LatticeVec& v) {
    return std::vector<Coord>(v.data(), v.data() + v.size());
}

}  // namespace ainf

namespace Eigen {
template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
    using Real = mpz_class;
    using NonInteger = mpq_class;
    using Nested = mpz_class;
    enum {
        IsComplex = 0,
        IsInteger = 1,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 8,
        MulCost = 16
    };
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
};
}  // namespace Eigen
