#include "ainfcalc/intlinalg.hpp"

#include <cassert>
#include <sstream>

namespace ainf {

namespace {

IntMat identity(Eigen::Index n) {
    IntMat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = (i == j) ? 1 : 0;
    return m;
}

IntMat zeros(Eigen::Index r, Eigen::Index c) {
    IntMat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = 0;
    return m;
}

void swap_rows(IntMat& m, Eigen::Index a, Eigen::Index b) {
    if (a == b) return;
    for (Eigen::Index j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMat& m, Eigen::Index a, Eigen::Index b) {
    if (a == b) return;
    for (Eigen::Index i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row a -= q * row b
void row_sub(IntMat& m, Eigen::Index a, Eigen::Index b, const Int& q) {
    if (q == 0) return;
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(a, j) -= q * m(b, j);
}

void col_sub(IntMat& m, Eigen::Index a, Eigen::Index b, const Int& q) {
    if (q == 0) return;
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, a) -= q * m(i, b);
}

void negate_row(IntMat& m, Eigen::Index a) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace

SnfResult smith_normal_form(const IntMat& m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    SnfResult res;
    res.u = identity(rows);
    res.v = identity(cols);
    res.d = m;
    IntMat& d = res.d;

    Eigen::Index t = 0;
    const Eigen::Index bound = std::min(rows, cols);
    while (t < bound) {
        // pivot: smallest absolute value in the trailing submatrix, lowest index ties
        Eigen::Index pi = -1, pj = -1;
        Int best = 0;
        for (Eigen::Index i = t; i < rows; ++i) {
            for (Eigen::Index j = t; j < cols; ++j) {
                if (d(i, j) == 0) continue;
                Int a = abs_int(d(i, j));
                if (pi < 0 || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi < 0) break;  // trailing submatrix is zero
        swap_rows(d, t, pi);
        swap_rows(res.u, t, pi);
        swap_cols(d, t, pj);
        swap_cols(res.v, t, pj);

        bool clean = true;
        for (Eigen::Index i = t + 1; i < rows; ++i) {
            if (d(i, t) == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
            row_sub(d, i, t, q);
            row_sub(res.u, i, t, q);
            if (d(i, t) != 0) clean = false;
        }
        for (Eigen::Index j = t + 1; j < cols; ++j) {
            if (d(t, j) == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
            col_sub(d, j, t, q);
            col_sub(res.v, j, t, q);
            if (d(t, j) != 0) clean = false;
        }
        if (!clean) continue;  // remainders left; pick a smaller pivot next round

        // divisibility: pivot must divide the whole trailing submatrix
        bool divides = true;
        for (Eigen::Index i = t + 1; i < rows && divides; ++i) {
            for (Eigen::Index j = t + 1; j < cols; ++j) {
                if (d(i, j) % d(t, t) != 0) {
                    // fold the offending row into row t and restart the step
                    row_sub(d, t, i, Int(-1));
                    row_sub(res.u, t, i, Int(-1));
                    divides = false;
                    break;
                }
            }
        }
        if (!divides) continue;

        if (d(t, t) < 0) {
            negate_row(d, t);
            negate_row(res.u, t);
        }
        ++t;
    }
    res.rank = static_cast<int>(t);

#ifndef NDEBUG
    {
        IntMat check = res.u * m * res.v;
        assert(check.rows() == d.rows() && check.cols() == d.cols());
        for (Eigen::Index i = 0; i < check.rows(); ++i)
            for (Eigen::Index j = 0; j < check.cols(); ++j) assert(check(i, j) == d(i, j));
    }
#endif
    return res;
}

std::optional<IntVec> solve_integer(const IntMat& m, const IntVec& b) {
    if (b.size() != m.rows()) throw InvariantError("solve: dimension mismatch");
    SnfResult s = smith_normal_form(m);
    IntVec ub = s.u * b;
    IntVec y(m.cols());
    for (Eigen::Index i = 0; i < m.cols(); ++i) y[i] = 0;
    for (Eigen::Index i = 0; i < ub.size(); ++i) {
        Int di = (i < std::min(m.rows(), m.cols())) ? s.d(i, i) : Int(0);
        if (di == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % di != 0) return std::nullopt;
            if (i < m.cols()) y[i] = ub[i] / di;
        }
    }
    return IntVec(s.v * y);
}

IntMat kernel_basis(const IntMat& m) {
    SnfResult s = smith_normal_form(m);
    Eigen::Index k = m.cols() - s.rank;
    IntMat out = zeros(m.cols(), k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < m.cols(); ++i) out(i, j) = s.v(i, s.rank + j);
    return out;
}

IntComplex::IntComplex(Eigen::Index even, Eigen::Index odd, IntMat de, IntMat dodd)
    : even_rank(even), odd_rank(odd), d_even(std::move(de)), d_odd(std::move(dodd)) {
    if (d_even.rows() != odd_rank || d_even.cols() != even_rank)
        throw InvariantError("complex: d_even has wrong shape");
    if (d_odd.rows() != even_rank || d_odd.cols() != odd_rank)
        throw InvariantError("complex: d_odd has wrong shape");
    IntMat a = d_even * d_odd;
    IntMat b = d_odd * d_even;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0) throw InvariantError("complex: d_even * d_odd != 0");
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            if (b(i, j) != 0) throw InvariantError("complex: d_odd * d_even != 0");
}

IntComplex IntComplex::zero(Eigen::Index even, Eigen::Index odd) {
    return IntComplex(even, odd, zeros(odd, even), zeros(even, odd));
}

namespace {

HomologyPart homology_at(const IntMat& d_out, const IntMat& d_in) {
    // kernel of d_out modulo image of d_in
    IntMat k = kernel_basis(d_out);
    const Eigen::Index kn = k.cols();
    HomologyPart part;
    if (kn == 0) return part;
    // express the image inside the kernel lattice: K * X = d_in
    SnfResult ks = smith_normal_form(k);
    IntMat x = zeros(kn, d_in.cols());
    for (Eigen::Index c = 0; c < d_in.cols(); ++c) {
        IntVec b(d_in.rows());
        for (Eigen::Index i = 0; i < d_in.rows(); ++i) b[i] = d_in(i, c);
        IntVec ub = ks.u * b;
        IntVec y(kn);
        for (Eigen::Index i = 0; i < kn; ++i) y[i] = 0;
        for (Eigen::Index i = 0; i < ub.size(); ++i) {
            Int di = (i < std::min(ks.d.rows(), ks.d.cols())) ? ks.d(i, i) : Int(0);
            if (di == 0) {
                if (ub[i] != 0)
                    throw InvariantError("homology: image does not lie in kernel (not a complex?)");
            } else {
                if (ub[i] % di != 0)
                    throw InvariantError("homology: kernel basis not saturated");
                if (i < kn) y[i] = ub[i] / di;
            }
        }
        IntVec sol = ks.v * y;
        for (Eigen::Index i = 0; i < kn; ++i) x(i, c) = sol[i];
    }
    SnfResult xs = smith_normal_form(x);
    part.free_rank = static_cast<long>(kn - xs.rank);
    for (int i = 0; i < xs.rank; ++i)
        if (xs.d(i, i) >= 2) part.torsion.push_back(xs.d(i, i));
    return part;
}

}  // namespace

Homology homology(const IntComplex& c) {
    Homology h;
    h.even = homology_at(c.d_even, c.d_odd);
    h.odd = homology_at(c.d_odd, c.d_even);
    return h;
}

bool is_acyclic(const IntComplex& c) {
    Homology h = homology(c);
    return h.even.trivial() && h.odd.trivial();
}

IntComplex mapping_cone(const IntComplex& x, const IntComplex& y,
                        const IntMat& g_even, const IntMat& g_odd) {
    if (g_even.rows() != y.even_rank || g_even.cols() != x.even_rank ||
        g_odd.rows() != y.odd_rank || g_odd.cols() != x.odd_rank)
        throw InvariantError("cone: chain map has wrong shape");
    // C_even = X_odd + Y_even, C_odd = X_even + Y_odd, d(xv, yv) = (dX xv, g xv + dY yv)
    Eigen::Index ce = x.odd_rank + y.even_rank;
    Eigen::Index co = x.even_rank + y.odd_rank;
    IntMat de = zeros(co, ce);
    for (Eigen::Index i = 0; i < x.even_rank; ++i)
        for (Eigen::Index j = 0; j < x.odd_rank; ++j) de(i, j) = x.d_odd(i, j);
    for (Eigen::Index i = 0; i < y.odd_rank; ++i)
        for (Eigen::Index j = 0; j < x.odd_rank; ++j) de(x.even_rank + i, j) = g_odd(i, j);
    for (Eigen::Index i = 0; i < y.odd_rank; ++i)
        for (Eigen::Index j = 0; j < y.even_rank; ++j) de(x.even_rank + i, x.odd_rank + j) = y.d_even(i, j);
    IntMat dodd = zeros(ce, co);
    for (Eigen::Index i = 0; i < x.odd_rank; ++i)
        for (Eigen::Index j = 0; j < x.even_rank; ++j) dodd(i, j) = x.d_even(i, j);
    for (Eigen::Index i = 0; i < y.even_rank; ++i)
        for (Eigen::Index j = 0; j < x.even_rank; ++j) dodd(x.odd_rank + i, j) = g_even(i, j);
    for (Eigen::Index i = 0; i < y.even_rank; ++i)
        for (Eigen::Index j = 0; j < y.odd_rank; ++j) dodd(x.odd_rank + i, x.even_rank + j) = y.d_odd(i, j);
    return IntComplex(ce, co, de, dodd);
}

std::string to_string(const IntMat& m) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << " ";
            os << m(i, j).get_str();
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace ainf
