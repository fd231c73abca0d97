#pragma once

#include "zp/complex.hpp"

#include <array>
#include <cstdint>

namespace zp {

/// 2x2 integer matrix (a, b; c, d). Entries stay small in this library, so
/// 64-bit arithmetic is exact; overflow is checked where products grow.
struct IntMat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return a * d - b * c; }
    static IntMat2 identity() { return {}; }
    friend bool operator==(const IntMat2&, const IntMat2&) = default;
};

IntMat2 operator*(const IntMat2& x, const IntMat2& y);
/// Inverse of a determinant +-1 matrix.
IntMat2 unimodular_inverse(const IntMat2& m);
/// Adjugate (d, -b; -c, a); m * adj(m) = det(m) * I.
IntMat2 adjugate(const IntMat2& m);

/// 2x2 complex matrix, row-major, zero-based indexing.
struct Mat2 {
    std::array<std::array<Complex, 2>, 2> e;

    Mat2() = default;
    explicit Mat2(mpfr_prec_t bits);
    Mat2(Complex m00, Complex m01, Complex m10, Complex m11);

    Complex& operator()(int i, int j) { return e[i][j]; }
    const Complex& operator()(int i, int j) const { return e[i][j]; }

    mpfr_prec_t precision() const;
    Complex det() const;
    static Mat2 identity(mpfr_prec_t bits);
    static Mat2 diagonal(const Complex& x, const Complex& y);
    static Mat2 from_int(const IntMat2& m, mpfr_prec_t bits);
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator+(const Mat2& x, const Mat2& y);
Mat2 operator-(const Mat2& x, const Mat2& y);
Mat2 operator*(const Mat2& x, const Complex& s);
Mat2 operator*(const Complex& s, const Mat2& x);
Mat2 operator/(const Mat2& x, const Complex& s);
Mat2 inverse(const Mat2& m);
Mat2 adjugate(const Mat2& m);
/// max_{i,j} |m_ij|
Real max_norm(const Mat2& m);

/// Row vector times matrix.
std::array<Complex, 2> row_times(const std::array<Complex, 2>& row, const Mat2& m);

}  // namespace zp
