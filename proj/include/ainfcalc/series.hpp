#pragma once

#include "ainfcalc/cone.hpp"

#include <map>

namespace ainf {

/// A truncated sparse element of the completed monoid ring: finitely many
/// terms n_alpha T^alpha with alpha in the dual monoid and ord(alpha) below
/// the truncation order. A PowerSeries represents a coset modulo the
/// trunc_order-th power of the augmentation ideal; binary operations keep
/// the coarser (smaller) truncation of their inputs.
class PowerSeries {
public:
    PowerSeries(ConePtr cone, int trunc_order);

    static PowerSeries zero(ConePtr cone, int trunc_order) { return PowerSeries(std::move(cone), trunc_order); }
    static PowerSeries constant(ConePtr cone, int trunc_order, Int c);
    static PowerSeries monomial(ConePtr cone, int trunc_order, const LatticeVec& alpha, Int c = 1);

    const ConePtr& cone() const { return cone_; }
    int trunc_order() const { return trunc_; }
    const std::map<LatticeVec, Int, LexLess>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    /// Minimum adic order over the support; kValuationInfinity for zero.
    int valuation() const;
    Int constant_term() const;
    Int coeff(const LatticeVec& alpha) const;

    PowerSeries truncated(int new_order) const;

    PowerSeries operator-() const;
    PowerSeries& operator+=(const PowerSeries& rhs);
    PowerSeries& operator-=(const PowerSeries& rhs);
    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { a += b; return a; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { a -= b; return a; }
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
    PowerSeries& operator*=(const PowerSeries& rhs) { *this = *this * rhs; return *this; }
    PowerSeries scaled(const Int& c) const;

    bool operator==(const PowerSeries& rhs) const;
    bool operator!=(const PowerSeries& rhs) const { return !(*this == rhs); }

    std::string to_string() const;

    /// Adds c * T^alpha, dropping the term if it lands at or above the
    /// truncation order. Throws if alpha is outside the dual monoid.
    void add_term(const LatticeVec& alpha, const Int& c);

private:
    void require_compatible(const PowerSeries& rhs) const;

    ConePtr cone_;
    int trunc_;
    std::map<LatticeVec, Int, LexLess> terms_;
};

/// Truncated Novikov-type series: integer combinations of t^lambda with
/// rational exponents below the cutoff level.
class NovikovSeries {
public:
    explicit NovikovSeries(Rat cutoff) : cutoff_(std::move(cutoff)) {}

    const Rat& cutoff() const { return cutoff_; }
    const std::map<Rat, Int>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Least exponent in the support, or nullopt for the zero series.
    std::optional<Rat> min_exponent() const;

    void add_term(const Rat& exponent, const Int& c);

    friend NovikovSeries operator+(const NovikovSeries& a, const NovikovSeries& b);
    friend NovikovSeries operator*(const NovikovSeries& a, const NovikovSeries& b);
    bool operator==(const NovikovSeries& rhs) const {
        return cutoff_ == rhs.cutoff_ && terms_ == rhs.terms_;
    }

    std::string to_string() const;

private:
    Rat cutoff_;
    std::map<Rat, Int> terms_;
};

/// The filtration scale for a specialization point: the minimum of
/// kappa over the nonzero dual lattice points. kappa must pair strictly
/// positively with every extreme ray of the dual monoid.
Rat novikov_scale(const Cone& cone, const std::vector<Rat>& kappa);

/// Applies T^alpha -> t^(kappa . alpha) termwise, collecting exponents;
/// the result is truncated at level scale * trunc_order.
NovikovSeries novikov_specialize(const PowerSeries& s, const std::vector<Rat>& kappa);

}  // namespace ainf
