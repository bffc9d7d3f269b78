#include "ainfcalc/series.hpp"

#include <algorithm>
#include <sstream>

namespace ainf {

PowerSeries::PowerSeries(ConePtr cone, int trunc_order)
    : cone_(std::move(cone)), trunc_(trunc_order) {
    if (!cone_) throw InvariantError("series: null cone");
    if (trunc_ < 1) throw InvariantError("series: truncation order must be >= 1");
}

PowerSeries PowerSeries::constant(ConePtr cone, int trunc_order, Int c) {
    PowerSeries s(std::move(cone), trunc_order);
    s.add_term(s.cone_->zero(), c);
    return s;
}

PowerSeries PowerSeries::monomial(ConePtr cone, int trunc_order, const LatticeVec& alpha, Int c) {
    PowerSeries s(std::move(cone), trunc_order);
    s.add_term(alpha, c);
    return s;
}

void PowerSeries::add_term(const LatticeVec& alpha, const Int& c) {
    if (c == 0) return;
    if (!cone_->contains(alpha))
        throw InvariantError("series: exponent outside the dual monoid");
    if (cone_->ord(alpha) >= trunc_) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        terms_.emplace(alpha, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int PowerSeries::valuation() const {
    int best = kValuationInfinity;
    for (const auto& [alpha, c] : terms_)
        best = std::min(best, cone_->ord(alpha));
    return best;
}

Int PowerSeries::constant_term() const {
    auto it = terms_.find(cone_->zero());
    return it == terms_.end() ? Int(0) : it->second;
}

Int PowerSeries::coeff(const LatticeVec& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Int(0) : it->second;
}

PowerSeries PowerSeries::truncated(int new_order) const {
    if (new_order >= trunc_) {
        if (new_order == trunc_) return *this;
        throw InvariantError("series: cannot raise truncation order");
    }
    PowerSeries out(cone_, new_order);
    for (const auto& [alpha, c] : terms_) out.add_term(alpha, c);
    return out;
}

void PowerSeries::require_compatible(const PowerSeries& rhs) const {
    if (!same_cone(cone_, rhs.cone_))
        throw InvariantError("series: cone mismatch");
}

PowerSeries PowerSeries::operator-() const {
    PowerSeries out(cone_, trunc_);
    for (const auto& [alpha, c] : terms_) out.terms_.emplace(alpha, -c);
    return out;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& rhs) {
    require_compatible(rhs);
    if (rhs.trunc_ < trunc_) *this = truncated(rhs.trunc_);
    for (const auto& [alpha, c] : rhs.terms_) add_term(alpha, c);
    return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& rhs) {
    require_compatible(rhs);
    if (rhs.trunc_ < trunc_) *this = truncated(rhs.trunc_);
    for (const auto& [alpha, c] : rhs.terms_) add_term(alpha, -c);
    return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    a.require_compatible(b);
    PowerSeries out(a.cone_, std::min(a.trunc_, b.trunc_));
    for (const auto& [alpha, ca] : a.terms_) {
        for (const auto& [beta, cb] : b.terms_) {
            out.add_term(alpha + beta, ca * cb);
        }
    }
    return out;
}

PowerSeries PowerSeries::scaled(const Int& c) const {
    PowerSeries out(cone_, trunc_);
    if (c == 0) return out;
    for (const auto& [alpha, coeff] : terms_) out.terms_.emplace(alpha, coeff * c);
    return out;
}

bool PowerSeries::operator==(const PowerSeries& rhs) const {
    if (!same_cone(cone_, rhs.cone_)) return false;
    int n = std::min(trunc_, rhs.trunc_);
    PowerSeries l = trunc_ == n ? *this : truncated(n);
    PowerSeries r = rhs.trunc_ == n ? rhs : rhs.truncated(n);
    return l.terms_ == r.terms_;
}

std::string PowerSeries::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [alpha, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        if (!alpha.isZero()) {
            os << "*T^(";
            for (Eigen::Index i = 0; i < alpha.size(); ++i) {
                if (i) os << ",";
                os << alpha[i];
            }
            os << ")";
        }
    }
    return os.str();
}

std::optional<Rat> NovikovSeries::min_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first;
}

void NovikovSeries::add_term(const Rat& exponent, const Int& c) {
    if (c == 0) return;
    if (exponent < 0) throw InvariantError("novikov: negative exponent");
    if (exponent >= cutoff_) return;
    auto it = terms_.find(exponent);
    if (it == terms_.end()) {
        terms_.emplace(exponent, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

NovikovSeries operator+(const NovikovSeries& a, const NovikovSeries& b) {
    NovikovSeries out(std::min(a.cutoff_, b.cutoff_));
    for (const auto& [e, c] : a.terms_) out.add_term(e, c);
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
}

NovikovSeries operator*(const NovikovSeries& a, const NovikovSeries& b) {
    NovikovSeries out(std::min(a.cutoff_, b.cutoff_));
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    return out;
}

std::string NovikovSeries::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str() << "*t^(" << e.get_str() << ")";
    }
    return os.str();
}

namespace {

Rat dot(const std::vector<Rat>& kappa, const LatticeVec& v) {
    Rat out = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) out += kappa[static_cast<size_t>(i)] * Rat(v[i]);
    return out;
}

// All-positive coefficients lambda with kappa = sum lambda_i delta_i.
// Exists exactly when kappa is interior; used to bound the pairing box
// in the lattice minimization below.
std::vector<Rat> positive_decomposition(const Cone& cone, const std::vector<Rat>& kappa,
                                        const std::vector<LatticeVec>& rays) {
    const int d = cone.ambient_dim();
    const int s = cone.generator_count();
    LatticeVec gen_sum = cone.zero();
    for (int i = 0; i < s; ++i) gen_sum += cone.generator(i);
    Rat eps;
    bool have_eps = false;
    for (const auto& r : rays) {
        Rat num = dot(kappa, r);
        Rat den = 1 + Rat(gen_sum.dot(r));
        Rat cand = num / den;
        if (!have_eps || cand < eps) { eps = cand; have_eps = true; }
    }
    if (!have_eps) eps = 1;  // no rays: ambient dim 0 handled by caller
    std::vector<Rat> shifted(kappa);
    for (int j = 0; j < d; ++j) shifted[static_cast<size_t>(j)] -= eps * Rat(gen_sum[j]);

    // Caratheodory search over d-subsets of generators for shifted = sum nu_i delta_i, nu >= 0
    std::vector<int> c(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] = i;
    while (true) {
        // solve the d x d system (columns = chosen generators)
        std::vector<std::vector<Rat>> m(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(d + 1)));
        for (int row = 0; row < d; ++row) {
            for (int i = 0; i < d; ++i)
                m[static_cast<size_t>(row)][static_cast<size_t>(i)] = Rat(cone.generator(c[static_cast<size_t>(i)])[row]);
            m[static_cast<size_t>(row)][static_cast<size_t>(d)] = shifted[static_cast<size_t>(row)];
        }
        bool singular = false;
        for (int col = 0; col < d; ++col) {
            int piv = -1;
            for (int r = col; r < d; ++r)
                if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) { piv = r; break; }
            if (piv < 0) { singular = true; break; }
            std::swap(m[static_cast<size_t>(col)], m[static_cast<size_t>(piv)]);
            Rat p = m[static_cast<size_t>(col)][static_cast<size_t>(col)];
            for (int j = 0; j <= d; ++j) m[static_cast<size_t>(col)][static_cast<size_t>(j)] /= p;
            for (int r = 0; r < d; ++r) {
                if (r == col) continue;
                Rat f = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
                if (f == 0) continue;
                for (int j = 0; j <= d; ++j)
                    m[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(col)][static_cast<size_t>(j)];
            }
        }
        if (!singular) {
            bool ok = true;
            for (int i = 0; i < d; ++i)
                if (m[static_cast<size_t>(i)][static_cast<size_t>(d)] < 0) { ok = false; break; }
            if (ok) {
                std::vector<Rat> lambda(static_cast<size_t>(s), eps);
                for (int i = 0; i < d; ++i)
                    lambda[static_cast<size_t>(c[static_cast<size_t>(i)])] += m[static_cast<size_t>(i)][static_cast<size_t>(d)];
                return lambda;
            }
        }
        int i = d - 1;
        while (i >= 0 && c[static_cast<size_t>(i)] == s - d + i) --i;
        if (i < 0) break;
        ++c[static_cast<size_t>(i)];
        for (int j = i + 1; j < d; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
    }
    throw InvariantError("novikov: specialization point is not interior");
}

}  // namespace

Rat novikov_scale(const Cone& cone, const std::vector<Rat>& kappa) {
    const int d = cone.ambient_dim();
    if (static_cast<int>(kappa.size()) != d)
        throw InvariantError("novikov: kappa dimension mismatch");
    if (d == 0) return Rat(1);
    auto rays = cone.dual_rays();
    for (const auto& r : rays) {
        if (dot(kappa, r) <= 0)
            throw InvariantError("novikov: kappa not interior (nonpositive on a dual ray)");
    }
    auto lambda = positive_decomposition(cone, kappa, rays);

    // initial bound: kappa on primitive rays
    Rat c0;
    bool have = false;
    for (const auto& r : rays) {
        Rat v = dot(kappa, r);
        if (!have || v < c0) { c0 = v; have = true; }
    }
    if (!have) throw InvariantError("novikov: dual monoid has no rays");

    // minimize kappa over nonzero lattice points with kappa(beta) <= c0;
    // pairing caps p_i <= c0 / lambda_i make the search box finite
    std::vector<Rat> caps(static_cast<size_t>(cone.generator_count()));
    for (int i = 0; i < cone.generator_count(); ++i)
        caps[static_cast<size_t>(i)] = c0 / lambda[static_cast<size_t>(i)];
    // coordinates via the cone's basis-row trick are private; redo the box here
    // with a helper lattice point whose pairings realize the caps: enumerate
    // integer points in the rational polytope {0 <= <x,delta_i> <= caps_i}.
    // Bounds per coordinate from a spanning subset handled by Cone::below via
    // a synthetic cap vector is not available, so re-derive with rational caps.
    std::vector<LatticeVec> gens;
    gens.reserve(static_cast<size_t>(cone.generator_count()));
    for (int i = 0; i < cone.generator_count(); ++i) gens.push_back(cone.generator(i));
    // choose a spanning subset and invert (same construction as in Cone)
    std::vector<int> rows;
    {
        // greedy: try prefixes until rank d
        std::vector<int> all(gens.size());
        for (size_t i = 0; i < gens.size(); ++i) all[i] = static_cast<int>(i);
        // Gaussian elimination with partial selection
        std::vector<std::vector<Rat>> work;
        for (int r : all) {
            std::vector<Rat> v(static_cast<size_t>(d));
            for (int j = 0; j < d; ++j) v[static_cast<size_t>(j)] = Rat(gens[static_cast<size_t>(r)][j]);
            for (auto& w : work) {
                int pc = -1;
                for (int j = 0; j < d; ++j)
                    if (w[static_cast<size_t>(j)] != 0) { pc = j; break; }
                if (pc < 0) continue;
                Rat f = v[static_cast<size_t>(pc)] / w[static_cast<size_t>(pc)];
                for (int j = 0; j < d; ++j) v[static_cast<size_t>(j)] -= f * w[static_cast<size_t>(j)];
            }
            if (std::any_of(v.begin(), v.end(), [](const Rat& x) { return x != 0; })) {
                work.push_back(v);
                rows.push_back(r);
                if (static_cast<int>(rows.size()) == d) break;
            }
        }
    }
    // invert chosen rows
    std::vector<std::vector<Rat>> inv(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(d)));
    {
        std::vector<std::vector<Rat>> m(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(2 * d)));
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(gens[static_cast<size_t>(rows[static_cast<size_t>(i)])][j]);
            m[static_cast<size_t>(i)][static_cast<size_t>(d + i)] = 1;
        }
        for (int col = 0; col < d; ++col) {
            int piv = -1;
            for (int r = col; r < d; ++r)
                if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) { piv = r; break; }
            std::swap(m[static_cast<size_t>(col)], m[static_cast<size_t>(piv)]);
            Rat p = m[static_cast<size_t>(col)][static_cast<size_t>(col)];
            for (int j = 0; j < 2 * d; ++j) m[static_cast<size_t>(col)][static_cast<size_t>(j)] /= p;
            for (int r = 0; r < d; ++r) {
                if (r == col) continue;
                Rat f = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
                if (f == 0) continue;
                for (int j = 0; j < 2 * d; ++j)
                    m[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(col)][static_cast<size_t>(j)];
            }
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) inv[static_cast<size_t>(i)][static_cast<size_t>(j)] = m[static_cast<size_t>(i)][static_cast<size_t>(d + j)];
    }
    std::vector<Coord> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        Rat mn = 0, mx = 0;
        for (int k = 0; k < d; ++k) {
            Rat lo_k = 0, hi_k = caps[static_cast<size_t>(rows[static_cast<size_t>(k)])];
            Rat cmin = inv[static_cast<size_t>(j)][static_cast<size_t>(k)] * lo_k;
            Rat cmax = inv[static_cast<size_t>(j)][static_cast<size_t>(k)] * hi_k;
            if (cmin > cmax) std::swap(cmin, cmax);
            mn += cmin;
            mx += cmax;
        }
        Int fl, ce;
        mpz_fdiv_q(fl.get_mpz_t(), mn.get_num().get_mpz_t(), mn.get_den().get_mpz_t());
        mpz_cdiv_q(ce.get_mpz_t(), mx.get_num().get_mpz_t(), mx.get_den().get_mpz_t());
        lo[static_cast<size_t>(j)] = fl.get_si();
        hi[static_cast<size_t>(j)] = ce.get_si();
    }
    Rat best = c0;
    LatticeVec beta(d);
    std::vector<Coord> cur = lo;
    while (true) {
        for (int j = 0; j < d; ++j) beta[j] = cur[static_cast<size_t>(j)];
        if (!beta.isZero() && cone.contains(beta)) {
            Rat v = dot(kappa, beta);
            if (v > 0 && v < best) best = v;
            if (v <= 0)
                throw InvariantError("novikov: kappa not interior (nonpositive on a lattice point)");
        }
        int j = d - 1;
        while (j >= 0 && cur[static_cast<size_t>(j)] == hi[static_cast<size_t>(j)]) {
            cur[static_cast<size_t>(j)] = lo[static_cast<size_t>(j)];
            --j;
        }
        if (j < 0) break;
        ++cur[static_cast<size_t>(j)];
    }
    return best;
}

NovikovSeries novikov_specialize(const PowerSeries& s, const std::vector<Rat>& kappa) {
    Rat a = novikov_scale(*s.cone(), kappa);
    NovikovSeries out(a * Rat(s.trunc_order()));
    for (const auto& [alpha, c] : s.terms()) {
        Rat e = 0;
        for (Eigen::Index i = 0; i < alpha.size(); ++i) e += kappa[static_cast<size_t>(i)] * Rat(alpha[i]);
        out.add_term(e, c);
    }
    return out;
}

}  // namespace ainf
