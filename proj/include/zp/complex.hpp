#pragma once

#include "zp/real.hpp"

#include <string>

namespace zp {

/// Complex number with arbitrary-precision real and imaginary parts.
struct Complex {
    Real re;
    Real im;

    Complex() = default;
    explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    /// Purely real value; the imaginary part takes the same precision.
    explicit Complex(const Real& r) : re(r), im(r.precision()) {}
    Complex(double r, double i, mpfr_prec_t bits) : re(r, bits), im(i, bits) {}

    mpfr_prec_t precision() const { return std::max(re.precision(), im.precision()); }
    Complex with_precision(mpfr_prec_t bits) const {
        return {re.with_precision(bits), im.with_precision(bits)};
    }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& o);
    Complex& operator*=(long o);
    Complex& operator/=(long o);

    std::string to_string(int digits = 30) const;
};

Complex operator-(const Complex& a);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator+(const Complex& a, long b);
Complex operator-(const Complex& a, long b);
Complex operator*(const Complex& a, long b);
Complex operator*(long a, const Complex& b);
Complex operator/(const Complex& a, long b);
Complex operator/(long a, const Complex& b);

Complex conj(const Complex& z);
/// |z|^2
Real norm(const Complex& z);
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex exp(const Complex& z);
/// Principal branch.
Complex log(const Complex& z);
/// Principal branch (non-negative real part).
Complex sqrt(const Complex& z);
Complex pow(const Complex& z, long n);
Complex inverse(const Complex& z);

/// Componentwise max-modulus norm helper: max(|a|, |b|).
Real max_abs(const Complex& a, const Complex& b);

}  // namespace zp
