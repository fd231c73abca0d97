#pragma once

#include "zp/complex.hpp"

#include <cstddef>

namespace zp {

inline constexpr int kDefaultPrecisionBits = 256;
inline constexpr int kMinPrecisionBits = 64;

/// Working precision and tolerance shared by every numerical operation.
///
/// tol defaults to 2^(-bits/2); residuals reported anywhere in the library
/// are meant to be compared against this value (or its square root for
/// heuristic detections).
class PrecisionContext {
public:
    explicit PrecisionContext(int bits = kDefaultPrecisionBits);
    PrecisionContext(int bits, const Real& tol, std::size_t max_terms = 1'000'000);

    int bits() const { return bits_; }
    const Real& tol() const { return tol_; }
    Real sqrt_tol() const { return sqrt(tol_); }
    std::size_t max_terms() const { return max_terms_; }

    const Real& pi() const { return pi_; }
    const Complex& two_pi_i() const { return two_pi_i_; }

    Real real(long v) const { return Real(v, bits_); }
    Real real(double v) const { return Real(v, bits_); }
    Real zero() const { return Real(bits_); }
    Complex complex(double re, double im) const { return Complex(re, im, bits_); }
    Complex complex(const Real& re) const { return Complex(re.with_precision(bits_), Real(bits_)); }
    Complex czero() const { return Complex(bits_); }
    Complex cone() const { return Complex(Real(1L, bits_), Real(bits_)); }
    Complex i() const { return Complex(Real(bits_), Real(1L, bits_)); }

    /// Same settings at twice the precision (tol rescaled to the new default).
    PrecisionContext doubled() const;

private:
    int bits_;
    Real tol_;
    std::size_t max_terms_;
    Real pi_;
    Complex two_pi_i_;
};

/// Precision taken from ZP_PRECISION_BITS when set and valid, else the default.
int precision_from_environment(int fallback = kDefaultPrecisionBits);

}  // namespace zp
