#pragma once

#include "zp/exactpoly.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace zp {

/// Phi_N(X, Y) = sum coeffs[i][k] X^i Y^k, i, k <= psi(N).
struct ModularPolynomial {
    enum class Provenance { Recovered, Supplied };

    long N = 1;
    std::vector<std::vector<mpz_class>> coeffs;
    Provenance provenance = Provenance::Recovered;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_symmetric() const;

    mpz_class eval(const mpz_class& x, const mpz_class& y) const;
    mpq_class eval(const mpq_class& x, const mpq_class& y) const;
    Complex eval(const Complex& x, const Complex& y) const;
    /// Coefficients in X after substituting Y = y, constant term first.
    std::vector<Complex> specialize_y(const Complex& y) const;

    /// Checks shape, integrality is implied by the type; throws ParseError on bad shape.
    static ModularPolynomial supplied(long N, std::vector<std::vector<mpz_class>> coeffs);
};

/// prod over cyclic sublattices (a, b; 0, d) of (x - j((a tau + b)/d)).
Complex phi_eval_numeric(long N, const Complex& x, const Complex& tau, const PrecisionContext& ctx);

/// The j-values j((a tau + b)/d) whose product defines Phi_N(X, j(tau)).
std::vector<Complex> isogenous_j_values(long N, const Complex& tau, const PrecisionContext& ctx);

/// Integer coefficients from interpolation at integer Y nodes; precision is
/// doubled until the rounded table repeats (NonConvergence beyond max_bits).
ModularPolynomial phi_recover_exact(long N, const PrecisionContext& ctx, int max_bits = 4096);

/// Memoized phi_recover_exact at default settings; thread-safe.
const ModularPolynomial& modular_polynomial(long N);

/// Numerator of Phi(f(t), g(t)) after clearing denominators, with factors shared
/// with the denominators removed; primitive with positive leading coefficient.
/// Throws DegenerateInput if Phi(f, g) vanishes identically.
IntPoly phi_specialize(const ModularPolynomial& phi, const RatFunc& f, const RatFunc& g);

}  // namespace zp
