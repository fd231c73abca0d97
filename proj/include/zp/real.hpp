#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <string>

namespace zp {

/// Arbitrary-precision real number backed by an MPFR value.
///
/// Every value carries its own mantissa precision in bits. Binary operations
/// produce a result at the larger of the two operand precisions, so mixing a
/// 256-bit and a 512-bit value never silently loses the wider one.
class Real {
public:
    Real() : Real(64) {}
    explicit Real(mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }
    Real(long value, mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_si(v_, value, MPFR_RNDN);
    }
    Real(int value, mpfr_prec_t bits) : Real(static_cast<long>(value), bits) {}
    Real(double value, mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_d(v_, value, MPFR_RNDN);
    }
    Real(const mpz_class& value, mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
    }
    Real(const mpq_class& value, mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
    }
    static Real from_string(const std::string& text, mpfr_prec_t bits);

    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    /// Copy of this value rounded to `bits`.
    Real with_precision(mpfr_prec_t bits) const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    /// Base-2 logarithm of |x| as a double; -inf for zero.
    double log2_abs() const;
    /// Nearest integer (ties away from zero).
    mpz_class round_to_integer() const;
    mpz_class floor_to_integer() const;
    /// Decimal representation with `digits` significant digits.
    std::string to_string(int digits = 30) const;

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator*=(long o);
    Real& operator/=(long o);

private:
    mpfr_t v_;
};

mpfr_prec_t common_precision(const Real& a, const Real& b);

Real operator-(const Real& a);
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator*(long a, const Real& b);
Real operator/(const Real& a, long b);
Real operator/(long a, const Real& b);

std::partial_ordering operator<=>(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
std::partial_ordering operator<=>(const Real& a, long b);
bool operator==(const Real& a, long b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real floor(const Real& x);
/// x * 2^e, exact.
Real ldexp(const Real& x, long e);
Real pow(const Real& x, long n);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real const_pi(mpfr_prec_t bits);
/// 2^e at the given precision.
Real power_of_two(long e, mpfr_prec_t bits);

}  // namespace zp
