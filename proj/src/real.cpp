#include "zp/real.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace zp {

Real Real::from_string(const std::string& text, mpfr_prec_t bits) {
    Real r(bits);
    if (mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0) {
        throw std::invalid_argument("not a decimal number: " + text);
    }
    return r;
}

Real Real::with_precision(mpfr_prec_t bits) const {
    Real r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

double Real::log2_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    long e = 0;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(e);
}

mpz_class Real::round_to_integer() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDNA);
    return z;
}

mpz_class Real::floor_to_integer() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
}

std::string Real::to_string(int digits) const {
    if (is_zero()) return "0";
    std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    int n = mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), v_);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

Real& Real::operator+=(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator-=(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator*=(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator/=(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}
Real& Real::operator*=(long o) {
    mpfr_mul_si(v_, v_, o, MPFR_RNDN);
    return *this;
}
Real& Real::operator/=(long o) {
    mpfr_div_si(v_, v_, o, MPFR_RNDN);
    return *this;
}

mpfr_prec_t common_precision(const Real& a, const Real& b) {
    return std::max(a.precision(), b.precision());
}

Real operator-(const Real& a) {
    Real r(a.precision());
    mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}

#define ZP_REAL_BINOP(op, fn)                              \
    Real operator op(const Real& a, const Real& b) {       \
        Real r(common_precision(a, b));                    \
        fn(r.raw(), a.raw(), b.raw(), MPFR_RNDN);          \
        return r;                                          \
    }
ZP_REAL_BINOP(+, mpfr_add)
ZP_REAL_BINOP(-, mpfr_sub)
ZP_REAL_BINOP(*, mpfr_mul)
ZP_REAL_BINOP(/, mpfr_div)
#undef ZP_REAL_BINOP

Real operator+(const Real& a, long b) {
    Real r(a.precision());
    mpfr_add_si(r.raw(), a.raw(), b, MPFR_RNDN);
    return r;
}
Real operator-(const Real& a, long b) {
    Real r(a.precision());
    mpfr_sub_si(r.raw(), a.raw(), b, MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, long b) {
    Real r(a.precision());
    mpfr_mul_si(r.raw(), a.raw(), b, MPFR_RNDN);
    return r;
}
Real operator*(long a, const Real& b) { return b * a; }
Real operator/(const Real& a, long b) {
    Real r(a.precision());
    mpfr_div_si(r.raw(), a.raw(), b, MPFR_RNDN);
    return r;
}
Real operator/(long a, const Real& b) {
    Real r(b.precision());
    mpfr_si_div(r.raw(), a, b.raw(), MPFR_RNDN);
    return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.raw(), b.raw())) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.raw(), b.raw());
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
std::partial_ordering operator<=>(const Real& a, long b) {
    if (mpfr_nan_p(a.raw())) return std::partial_ordering::unordered;
    int c = mpfr_cmp_si(a.raw(), b);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}
bool operator==(const Real& a, long b) { return !mpfr_nan_p(a.raw()) && mpfr_cmp_si(a.raw(), b) == 0; }

#define ZP_REAL_UNARY(name, fn)                 \
    Real name(const Real& x) {                  \
        Real r(x.precision());                  \
        fn(r.raw(), x.raw(), MPFR_RNDN);        \
        return r;                               \
    }
ZP_REAL_UNARY(abs, mpfr_abs)
ZP_REAL_UNARY(sqrt, mpfr_sqrt)
ZP_REAL_UNARY(exp, mpfr_exp)
ZP_REAL_UNARY(log, mpfr_log)
ZP_REAL_UNARY(sin, mpfr_sin)
ZP_REAL_UNARY(cos, mpfr_cos)
#undef ZP_REAL_UNARY

Real floor(const Real& x) {
    Real r(x.precision());
    mpfr_floor(r.raw(), x.raw());
    return r;
}

Real atan2(const Real& y, const Real& x) {
    Real r(common_precision(y, x));
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

Real ldexp(const Real& x, long e) {
    Real r(x.precision());
    mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
    return r;
}

Real pow(const Real& x, long n) {
    Real r(x.precision());
    mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
    return r;
}

Real max(const Real& a, const Real& b) { return (a < b) ? b : a; }
Real min(const Real& a, const Real& b) { return (b < a) ? b : a; }

Real const_pi(mpfr_prec_t bits) {
    Real r(bits);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}

Real power_of_two(long e, mpfr_prec_t bits) {
    Real r(1L, bits);
    mpfr_mul_2si(r.raw(), r.raw(), e, MPFR_RNDN);
    return r;
}

}  // namespace zp
