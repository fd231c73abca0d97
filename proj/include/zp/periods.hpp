#pragma once

#include "zp/analytic.hpp"

#include <gmpxx.h>

#include <optional>
#include <utility>

namespace zp {

/// Oriented lattice basis with Im(omega2/omega1) > 0.
struct Lattice {
    Complex omega1;
    Complex omega2;

    Complex tau() const { return omega2 / omega1; }
    /// Throws DomainError unless omega1 != 0 and Im(tau) > 0.
    void validate() const;
    static Lattice from_tau(const Complex& tau, const PrecisionContext& ctx);
};

/// Row 0: first-kind periods (omega1, omega2). Row 1: second-kind periods
/// (eta1, eta2), normalized so omega1*eta2 - omega2*eta1 = 2 pi i.
struct FullPeriodMatrix {
    Mat2 p;
    Real legendre_residual;
};

struct CmCertificate {
    long disc = 0;
    long a = 0, b = 0, c = 0;  ///< a tau^2 + b tau + c = 0, gcd 1, a > 0
    Real residual;
};

struct StructuredPeriod {
    enum class Kind { Cm, Singular, Generic };
    Kind kind = Kind::Generic;
    Mat2 h;
    Complex varpi;                    ///< Cm only
    Complex d, dprime, e0, e0prime;   ///< Singular only

    /// diag(varpi/2pi i, 1/varpi), (d, e0; d', e0') or the identity.
    Mat2 structural_factor(const PrecisionContext& ctx) const;
};

ReducedTau reduce_tau(const Complex& tau, const PrecisionContext& ctx);

FullPeriodMatrix full_period_matrix(const Lattice& lat, const PrecisionContext& ctx);

/// Weierstrass invariants (g2, g3) = (60 G4, 140 G6) of the lattice.
std::pair<Complex, Complex> weierstrass_invariants(const Lattice& lat, const PrecisionContext& ctx);

/// Smallest-|D| quadratic relation with coefficients bounded by `bound`,
/// accepted when |a tau^2 + b tau + c| < sqrt(tol) * max(|a|,|b|,|c|).
std::optional<CmCertificate> detect_cm(const Complex& tau, long bound, const PrecisionContext& ctx);

/// h = (P / 2pi i) * diag(2pi i / varpi, varpi) with varpi = omega1.
StructuredPeriod decompose_cm(const FullPeriodMatrix& P, const PrecisionContext& ctx);

/// (d, e; d', e') * (1, N log x; 0, 1).
Mat2 make_singular_structure(const Complex& d, const Complex& dprime, const Complex& e, const Complex& eprime,
                             const mpq_class& N, const Complex& logx, const PrecisionContext& ctx);

/// A tau in the standard fundamental domain with j(tau) = value.
Complex inverse_j(const Complex& value, const PrecisionContext& ctx);

}  // namespace zp
