#include "zp/complex.hpp"

namespace zp {

Complex& Complex::operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
}
Complex& Complex::operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}
Complex& Complex::operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}
Complex& Complex::operator/=(const Complex& o) {
    *this = *this / o;
    return *this;
}
Complex& Complex::operator*=(const Real& o) {
    re *= o;
    im *= o;
    return *this;
}
Complex& Complex::operator*=(long o) {
    re *= o;
    im *= o;
    return *this;
}
Complex& Complex::operator/=(long o) {
    re /= o;
    im /= o;
    return *this;
}

std::string Complex::to_string(int digits) const {
    std::string s = re.to_string(digits);
    std::string t = im.to_string(digits);
    if (!t.empty() && t[0] == '-') return s + " - " + t.substr(1) + "i";
    return s + " + " + t + "i";
}

Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator/(const Complex& a, const Complex& b) {
    // Smith's algorithm keeps intermediate magnitudes bounded.
    if (abs(b.re) >= abs(b.im)) {
        Real ratio = b.im / b.re;
        Real den = b.re + b.im * ratio;
        return {(a.re + a.im * ratio) / den, (a.im - a.re * ratio) / den};
    }
    Real ratio = b.re / b.im;
    Real den = b.re * ratio + b.im;
    return {(a.re * ratio + a.im) / den, (a.im * ratio - a.re) / den};
}
Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator*(const Real& a, const Complex& b) { return b * a; }
Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
Complex operator+(const Complex& a, long b) { return {a.re + b, a.im}; }
Complex operator-(const Complex& a, long b) { return {a.re - b, a.im}; }
Complex operator*(const Complex& a, long b) { return {a.re * b, a.im * b}; }
Complex operator*(long a, const Complex& b) { return b * a; }
Complex operator/(const Complex& a, long b) { return {a.re / b, a.im / b}; }
Complex operator/(long a, const Complex& b) {
    return Complex(Real(a, b.precision()), Real(b.precision())) / b;
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real abs(const Complex& z) {
    Real r(z.precision());
    mpfr_hypot(r.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
    return r;
}

Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex exp(const Complex& z) {
    Real m = exp(z.re);
    Real s(z.precision()), c(z.precision());
    mpfr_sin_cos(s.raw(), c.raw(), z.im.raw(), MPFR_RNDN);
    return {m * c, m * s};
}

Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }

Complex sqrt(const Complex& z) {
    mpfr_prec_t bits = z.precision();
    if (z.is_zero()) return Complex(bits);
    Real m = abs(z);
    // sqrt((|z| + |re|)/2) is computed without cancellation; the other
    // component follows from im / (2 * that).
    Real t = sqrt((m + abs(z.re)) / 2L);
    if (z.re.sign() >= 0) {
        return {t, z.im / (2L * t)};
    }
    Real other = abs(z.im) / (2L * t);
    if (z.im.sign() < 0) return {other, -t};
    return {other, t};
}

Complex pow(const Complex& z, long n) {
    if (n < 0) return inverse(pow(z, -n));
    Complex result(Real(1L, z.precision()), Real(z.precision()));
    Complex base = z;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

Complex inverse(const Complex& z) {
    return Complex(Real(1L, z.precision()), Real(z.precision())) / z;
}

Real max_abs(const Complex& a, const Complex& b) { return max(abs(a), abs(b)); }

}  // namespace zp
