#include "ainfcalc/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ainf {

namespace {

// Fraction-free rank computation and selection of an invertible row subset.
// Returns indices of `dim` rows forming an invertible matrix, or empty if
// the rows do not span.
std::vector<int> select_basis_rows(const std::vector<LatticeVec>& rows, int dim) {
    if (dim == 0) return {};
    std::vector<std::vector<Rat>> work;
    std::vector<int> chosen;
    for (int r = 0; r < static_cast<int>(rows.size()) && static_cast<int>(chosen.size()) < dim; ++r) {
        std::vector<Rat> v(static_cast<size_t>(dim));
        for (int j = 0; j < dim; ++j) v[static_cast<size_t>(j)] = Rat(rows[static_cast<size_t>(r)][j]);
        // reduce against the rows already chosen
        for (size_t k = 0; k < work.size(); ++k) {
            // work[k] has a pivot at its leading nonzero column
            int pc = -1;
            for (int j = 0; j < dim; ++j)
                if (work[k][static_cast<size_t>(j)] != 0) { pc = j; break; }
            if (pc < 0) continue;
            Rat factor = v[static_cast<size_t>(pc)] / work[k][static_cast<size_t>(pc)];
            for (int j = 0; j < dim; ++j) v[static_cast<size_t>(j)] -= factor * work[k][static_cast<size_t>(j)];
        }
        bool nonzero = std::any_of(v.begin(), v.end(), [](const Rat& x) { return x != 0; });
        if (nonzero) {
            work.push_back(v);
            chosen.push_back(r);
        }
    }
    if (static_cast<int>(chosen.size()) < dim) return {};
    return chosen;
}

std::vector<std::vector<Rat>> invert_rows(const std::vector<LatticeVec>& rows,
                                          const std::vector<int>& which, int dim) {
    // Gauss-Jordan over rationals on the square matrix with the chosen rows.
    std::vector<std::vector<Rat>> m(static_cast<size_t>(dim), std::vector<Rat>(static_cast<size_t>(2 * dim)));
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j)
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(rows[static_cast<size_t>(which[static_cast<size_t>(i)])][j]);
        m[static_cast<size_t>(i)][static_cast<size_t>(dim + i)] = 1;
    }
    for (int col = 0; col < dim; ++col) {
        int piv = -1;
        for (int r = col; r < dim; ++r)
            if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) { piv = r; break; }
        if (piv < 0) throw InvariantError("cone: generator submatrix not invertible");
        std::swap(m[static_cast<size_t>(col)], m[static_cast<size_t>(piv)]);
        Rat p = m[static_cast<size_t>(col)][static_cast<size_t>(col)];
        for (int j = 0; j < 2 * dim; ++j) m[static_cast<size_t>(col)][static_cast<size_t>(j)] /= p;
        for (int r = 0; r < dim; ++r) {
            if (r == col) continue;
            Rat f = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < 2 * dim; ++j)
                m[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(col)][static_cast<size_t>(j)];
        }
    }
    std::vector<std::vector<Rat>> inv(static_cast<size_t>(dim), std::vector<Rat>(static_cast<size_t>(dim)));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) inv[static_cast<size_t>(i)][static_cast<size_t>(j)] = m[static_cast<size_t>(i)][static_cast<size_t>(dim + j)];
    return inv;
}

Coord floor_rat(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw InvariantError("cone: enumeration bound overflow");
    return q.get_si();
}

Coord ceil_rat(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw InvariantError("cone: enumeration bound overflow");
    return q.get_si();
}

LatticeVec primitive(const LatticeVec& v) {
    Coord g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, std::abs(v[i]));
    if (g <= 1) return v;
    LatticeVec out = v;
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] /= g;
    return out;
}

}  // namespace

Cone::Cone(int ambient_dim, std::vector<LatticeVec> generators,
           std::optional<std::vector<Rat>> ample,
           std::optional<std::vector<Rat>> anticanonical)
    : ambient_dim_(ambient_dim),
      generators_(std::move(generators)),
      ample_(std::move(ample)),
      anticanonical_(std::move(anticanonical)) {
    if (ambient_dim_ < 0) throw InvariantError("cone: negative ambient dimension");
    if (ambient_dim_ > 0 && generators_.empty())
        throw InvariantError("cone: at least one generator required");
    for (const auto& g : generators_) {
        if (g.size() != ambient_dim_)
            throw InvariantError("cone: generator has wrong length");
        if (ambient_dim_ > 0 && g.isZero())
            throw InvariantError("cone: zero generator");
    }
    basis_rows_ = select_basis_rows(generators_, ambient_dim_);
    if (ambient_dim_ > 0 && basis_rows_.empty())
        throw InvariantError("cone: generators do not have full rank");
    if (ambient_dim_ > 0) basis_inverse_ = invert_rows(generators_, basis_rows_, ambient_dim_);
    if (ample_ && static_cast<int>(ample_->size()) != generator_count())
        throw InvariantError("cone: ample tag length mismatch");
    if (anticanonical_ && static_cast<int>(anticanonical_->size()) != generator_count())
        throw InvariantError("cone: anticanonical tag length mismatch");
}

ConePtr Cone::trivial() {
    static ConePtr instance = std::make_shared<const Cone>(0, std::vector<LatticeVec>{});
    return instance;
}

bool Cone::same_as(const Cone& other) const {
    if (ambient_dim_ != other.ambient_dim_) return false;
    if (generators_.size() != other.generators_.size()) return false;
    for (size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i] != other.generators_[i]) return false;
    return true;
}

void Cone::check_vector(const LatticeVec& v) const {
    if (v.size() != ambient_dim_)
        throw InvariantError("cone: vector dimension mismatch");
}

bool Cone::contains(const LatticeVec& v) const {
    check_vector(v);
    for (const auto& g : generators_)
        if (g.dot(v) < 0) return false;
    return true;
}

std::vector<Coord> Cone::pairings(const LatticeVec& v) const {
    check_vector(v);
    std::vector<Coord> out;
    out.reserve(generators_.size());
    for (const auto& g : generators_) out.push_back(g.dot(v));
    return out;
}

std::vector<LatticeVec> Cone::below(const LatticeVec& alpha) const {
    check_vector(alpha);
    if (!contains(alpha)) throw InvariantError("cone: point not in dual monoid");
    if (ambient_dim_ == 0) return {zero()};

    // coordinate box from gamma = B^{-1} y, 0 <= y_i <= <alpha, delta_{b_i}>
    std::vector<Coord> caps;
    caps.reserve(basis_rows_.size());
    for (int r : basis_rows_) caps.push_back(generators_[static_cast<size_t>(r)].dot(alpha));
    std::vector<Coord> lo(static_cast<size_t>(ambient_dim_)), hi(static_cast<size_t>(ambient_dim_));
    for (int j = 0; j < ambient_dim_; ++j) {
        Rat mn = 0, mx = 0;
        for (int k = 0; k < ambient_dim_; ++k) {
            Rat c = basis_inverse_[static_cast<size_t>(j)][static_cast<size_t>(k)] * Rat(caps[static_cast<size_t>(k)]);
            if (c >= 0) mx += c; else mn += c;
        }
        lo[static_cast<size_t>(j)] = ceil_rat(mn);
        hi[static_cast<size_t>(j)] = floor_rat(mx);
    }

    std::vector<LatticeVec> out;
    LatticeVec gamma = zero();
    // odometer over the box, ascending => lexicographic output order
    std::vector<Coord> cur = lo;
    while (true) {
        for (int j = 0; j < ambient_dim_; ++j) gamma[j] = cur[static_cast<size_t>(j)];
        bool ok = true;
        for (const auto& g : generators_) {
            Coord p = g.dot(gamma);
            if (p < 0 || p > g.dot(alpha)) { ok = false; break; }
        }
        if (ok) out.push_back(gamma);
        int j = ambient_dim_ - 1;
        while (j >= 0 && cur[static_cast<size_t>(j)] == hi[static_cast<size_t>(j)]) {
            cur[static_cast<size_t>(j)] = lo[static_cast<size_t>(j)];
            --j;
        }
        if (j < 0) break;
        ++cur[static_cast<size_t>(j)];
    }
    return out;
}

int Cone::ord_unlocked(const LatticeVec& alpha, std::map<LatticeVec, int, LexLess>& memo) const {
    if (alpha.isZero()) return 0;
    auto it = memo.find(alpha);
    if (it != memo.end()) return it->second;
    int best = 1;
    for (const auto& gamma : below(alpha)) {
        if (gamma.isZero()) continue;
        LatticeVec rest = alpha - gamma;
        if (rest.isZero()) continue;
        best = std::max(best, 1 + ord_unlocked(rest, memo));
    }
    memo.emplace(alpha, best);
    return best;
}

int Cone::ord(const LatticeVec& alpha) const {
    check_vector(alpha);
    if (!contains(alpha)) throw InvariantError("cone: ord of point outside dual monoid");
    std::lock_guard<std::mutex> lock(memo_mutex_);
    return ord_unlocked(alpha, ord_memo_);
}

std::vector<std::vector<LatticeVec>> Cone::decompositions(const LatticeVec& alpha, int parts) const {
    check_vector(alpha);
    if (parts < 1) throw InvariantError("cone: decompositions needs parts >= 1");
    if (!contains(alpha)) throw InvariantError("cone: point not in dual monoid");
    if (parts == 1) return {{alpha}};
    std::vector<std::vector<LatticeVec>> out;
    for (const auto& gamma : below(alpha)) {
        auto tails = decompositions(alpha - gamma, parts - 1);
        for (auto& t : tails) {
            std::vector<LatticeVec> tuple;
            tuple.reserve(static_cast<size_t>(parts));
            tuple.push_back(gamma);
            for (auto& x : t) tuple.push_back(std::move(x));
            out.push_back(std::move(tuple));
        }
    }
    return out;
}

std::vector<LatticeVec> Cone::dual_rays() const {
    if (ambient_dim_ == 0) return {};
    if (ambient_dim_ == 1) {
        // one-dimensional: the dual monoid is a half line (strict convexity
        // of the primal cone is not assumed here; generators all multiples)
        LatticeVec r(1);
        r[0] = generators_[0][0] > 0 ? 1 : -1;
        return {r};
    }
    // A ray of the dual cone lies on the intersection of dim-1 facets
    // <x, delta_i> = 0. Enumerate subsets of size dim-1, solve, keep
    // solutions with all pairings >= 0. Small dimensions only.
    const int d = ambient_dim_;
    const int s = generator_count();
    std::vector<LatticeVec> rays;
    // enumerate (d-1)-subsets of {0..s-1}
    std::vector<int> c(static_cast<size_t>(d - 1));
    for (int i = 0; i < d - 1; ++i) c[static_cast<size_t>(i)] = i;
    if (s < d - 1) return {};
    while (true) {
        // nullspace of the (d-1) x d submatrix, rational elimination
        std::vector<std::vector<Rat>> m(static_cast<size_t>(d - 1), std::vector<Rat>(static_cast<size_t>(d)));
        for (int i = 0; i < d - 1; ++i)
            for (int j = 0; j < d; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(generators_[static_cast<size_t>(c[static_cast<size_t>(i)])][j]);
        // row reduce
        std::vector<int> pivot_col;
        int row = 0;
        for (int col = 0; col < d && row < d - 1; ++col) {
            int piv = -1;
            for (int r = row; r < d - 1; ++r)
                if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) { piv = r; break; }
            if (piv < 0) continue;
            std::swap(m[static_cast<size_t>(row)], m[static_cast<size_t>(piv)]);
            Rat p = m[static_cast<size_t>(row)][static_cast<size_t>(col)];
            for (int j = 0; j < d; ++j) m[static_cast<size_t>(row)][static_cast<size_t>(j)] /= p;
            for (int r = 0; r < d - 1; ++r) {
                if (r == row) continue;
                Rat f = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
                if (f == 0) continue;
                for (int j = 0; j < d; ++j)
                    m[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(row)][static_cast<size_t>(j)];
            }
            pivot_col.push_back(col);
            ++row;
        }
        if (row == d - 1) {
            // one-dimensional nullspace: free column = the one not a pivot
            std::vector<bool> is_pivot(static_cast<size_t>(d), false);
            for (int pc : pivot_col) is_pivot[static_cast<size_t>(pc)] = true;
            int free_col = -1;
            for (int j = 0; j < d; ++j)
                if (!is_pivot[static_cast<size_t>(j)]) { free_col = j; break; }
            std::vector<Rat> x(static_cast<size_t>(d), Rat(0));
            x[static_cast<size_t>(free_col)] = 1;
            for (int r = 0; r < d - 1; ++r)
                x[static_cast<size_t>(pivot_col[static_cast<size_t>(r)])] = -m[static_cast<size_t>(r)][static_cast<size_t>(free_col)];
            // clear denominators
            Int common = 1;
            for (const auto& q : x) common = lcm(common, Int(q.get_den()));
            LatticeVec v(d);
            for (int j = 0; j < d; ++j) {
                Int num = x[static_cast<size_t>(j)].get_num() * (common / x[static_cast<size_t>(j)].get_den());
                if (!num.fits_slong_p()) throw InvariantError("cone: ray coordinate overflow");
                v[j] = num.get_si();
            }
            for (int sign : {+1, -1}) {
                LatticeVec cand = primitive(LatticeVec(sign * v));
                bool ok = true;
                for (const auto& g : generators_)
                    if (g.dot(cand) < 0) { ok = false; break; }
                if (ok && !cand.isZero()) {
                    bool dup = false;
                    for (const auto& r : rays)
                        if (r == cand) { dup = true; break; }
                    if (!dup) rays.push_back(cand);
                }
            }
        }
        // next combination
        int i = d - 2;
        while (i >= 0 && c[static_cast<size_t>(i)] == s - (d - 1) + i) --i;
        if (i < 0) break;
        ++c[static_cast<size_t>(i)];
        for (int j = i + 1; j < d - 1; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
    }
    std::sort(rays.begin(), rays.end(), [](const LatticeVec& a, const LatticeVec& b) {
        return LexLess{}(a, b);
    });
    return rays;
}

}  // namespace ainf
