#include "zp/matrix.hpp"

#include "zp/errors.hpp"

namespace zp {

IntMat2 operator*(const IntMat2& x, const IntMat2& y) {
    std::int64_t r[4];
    bool overflow = false;
    auto mac = [&](std::int64_t p, std::int64_t q, std::int64_t s, std::int64_t t) {
        std::int64_t u = 0, v = 0, w = 0;
        overflow |= __builtin_mul_overflow(p, q, &u);
        overflow |= __builtin_mul_overflow(s, t, &v);
        overflow |= __builtin_add_overflow(u, v, &w);
        return w;
    };
    r[0] = mac(x.a, y.a, x.b, y.c);
    r[1] = mac(x.a, y.b, x.b, y.d);
    r[2] = mac(x.c, y.a, x.d, y.c);
    r[3] = mac(x.c, y.b, x.d, y.d);
    if (overflow) throw DomainError("integer matrix product overflows 64 bits");
    return {r[0], r[1], r[2], r[3]};
}

IntMat2 unimodular_inverse(const IntMat2& m) {
    std::int64_t det = m.det();
    if (det != 1 && det != -1) throw DegenerateInput("matrix is not unimodular");
    return {m.d * det, -m.b * det, -m.c * det, m.a * det};
}

IntMat2 adjugate(const IntMat2& m) { return {m.d, -m.b, -m.c, m.a}; }

Mat2::Mat2(mpfr_prec_t bits) {
    for (auto& row : e) {
        for (auto& x : row) x = Complex(bits);
    }
}

Mat2::Mat2(Complex m00, Complex m01, Complex m10, Complex m11) {
    e[0][0] = std::move(m00);
    e[0][1] = std::move(m01);
    e[1][0] = std::move(m10);
    e[1][1] = std::move(m11);
}

mpfr_prec_t Mat2::precision() const {
    mpfr_prec_t p = e[0][0].precision();
    for (const auto& row : e) {
        for (const auto& x : row) p = std::max(p, x.precision());
    }
    return p;
}

Complex Mat2::det() const { return e[0][0] * e[1][1] - e[0][1] * e[1][0]; }

Mat2 Mat2::identity(mpfr_prec_t bits) {
    Mat2 m(bits);
    m.e[0][0].re = Real(1L, bits);
    m.e[1][1].re = Real(1L, bits);
    return m;
}

Mat2 Mat2::diagonal(const Complex& x, const Complex& y) {
    mpfr_prec_t bits = std::max(x.precision(), y.precision());
    return {x, Complex(bits), Complex(bits), y};
}

Mat2 Mat2::from_int(const IntMat2& m, mpfr_prec_t bits) {
    auto c = [bits](std::int64_t v) { return Complex(Real(static_cast<long>(v), bits), Real(bits)); };
    return {c(m.a), c(m.b), c(m.c), c(m.d)};
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r.e[i][j] = x.e[i][0] * y.e[0][j] + x.e[i][1] * y.e[1][j];
    }
    return r;
}

Mat2 operator+(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r.e[i][j] = x.e[i][j] + y.e[i][j];
    }
    return r;
}

Mat2 operator-(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r.e[i][j] = x.e[i][j] - y.e[i][j];
    }
    return r;
}

Mat2 operator*(const Mat2& x, const Complex& s) {
    Mat2 r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r.e[i][j] = x.e[i][j] * s;
    }
    return r;
}

Mat2 operator*(const Complex& s, const Mat2& x) { return x * s; }

Mat2 operator/(const Mat2& x, const Complex& s) { return x * inverse(s); }

Mat2 adjugate(const Mat2& m) { return {m.e[1][1], -m.e[0][1], -m.e[1][0], m.e[0][0]}; }

Mat2 inverse(const Mat2& m) {
    Complex d = m.det();
    if (d.is_zero()) throw DegenerateInput("singular 2x2 matrix");
    return adjugate(m) / d;
}

Real max_norm(const Mat2& m) {
    Real r = abs(m.e[0][0]);
    r = max(r, abs(m.e[0][1]));
    r = max(r, abs(m.e[1][0]));
    r = max(r, abs(m.e[1][1]));
    return r;
}

std::array<Complex, 2> row_times(const std::array<Complex, 2>& row, const Mat2& m) {
    return {row[0] * m.e[0][0] + row[1] * m.e[1][0], row[0] * m.e[0][1] + row[1] * m.e[1][1]};
}

}  // namespace zp
