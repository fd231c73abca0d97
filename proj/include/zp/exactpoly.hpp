#pragma once

#include "zp/context.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace zp {

/// Dense univariate polynomial over Z, constant term first, no trailing zeros.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> coeffs);
    static IntPoly constant(const mpz_class& c);
    static IntPoly monomial(const mpz_class& c, int degree);
    /// a + b x
    static IntPoly linear(const mpz_class& a, const mpz_class& b);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  ///< -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    mpz_class coeff(int k) const;
    const mpz_class& lead() const;

    mpz_class content() const;  ///< nonnegative gcd of coefficients
    IntPoly primitive() const;  ///< content removed, leading coefficient positive
    IntPoly derivative() const;

    mpz_class eval(const mpz_class& x) const;
    mpq_class eval(const mpq_class& x) const;
    Complex eval(const Complex& x) const;

    std::vector<Complex> to_complex(mpfr_prec_t bits) const;
    std::string to_string(const std::string& var = "t") const;

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    void trim();
    std::vector<mpz_class> c_;
};

IntPoly operator+(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a);
IntPoly operator*(const IntPoly& a, const IntPoly& b);
IntPoly operator*(const IntPoly& a, const mpz_class& s);
IntPoly pow(const IntPoly& a, int e);

/// lead(b)^(deg a - deg b + 1) * a = q b + r.
IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b);
/// Exact quotient a / b; throws DomainError if b does not divide a over Z.
IntPoly exact_divide(const IntPoly& a, const IntPoly& b);
/// Coefficients divided by an integer that divides all of them.
IntPoly divide_content(const IntPoly& a, const mpz_class& s);
bool divides(const IntPoly& b, const IntPoly& a);

/// Primitive gcd with positive leading coefficient (subresultant PRS).
IntPoly gcd(const IntPoly& p, const IntPoly& q);
/// Sylvester determinant with the rows of p first.
mpz_class resultant(const IntPoly& p, const IntPoly& q);
/// Product of the distinct irreducible factors of p, primitive.
IntPoly squarefree(const IntPoly& p);

/// (1/deg) (log|lead| + sum log max(1, |root|)) of the primitive part.
Real mahler_height(const IntPoly& p, const PrecisionContext& ctx);

/// Roots of a squarefree defining polynomial; degree_bound = deg(defining).
struct AlgebraicPointSet {
    IntPoly defining;
    int degree_bound = 0;
    std::vector<Complex> roots;
};
AlgebraicPointSet isolate_points(const IntPoly& p, const PrecisionContext& ctx);

/// Element of Q(t) stored as num/den over Z, coprime, den with positive lead.
struct RatFunc {
    IntPoly num;
    IntPoly den = IntPoly::constant(1);

    RatFunc() = default;
    RatFunc(IntPoly n, IntPoly d);
    static RatFunc from_rational_coeffs(const std::vector<mpq_class>& num, const std::vector<mpq_class>& den);

    Complex eval(const Complex& t) const;
    std::string to_string(const std::string& var = "t") const;
    int degree() const { return std::max(num.degree(), den.degree()); }
};

/// Polynomial through (x_i, y_i) over Q, constant term first (Newton form).
std::vector<mpq_class> interpolate(const std::vector<mpq_class>& x, const std::vector<mpq_class>& y);

/// Primitive integer polynomial in y whose roots are f(t_i) over the roots t_i
/// of d: Res_t(d(t), y den(t) - num(t)) up to content.
IntPoly image_polynomial(const IntPoly& d, const RatFunc& f);

}  // namespace zp
