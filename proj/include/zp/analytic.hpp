#pragma once

#include "zp/context.hpp"
#include "zp/matrix.hpp"

#include <vector>

namespace zp {

/// Arithmetic-geometric mean choosing the square root at every
/// step: |a_n - b_n| <= |a_n + b_n|, ties toward positive real part.
/// Throws DomainError for a zero argument and NonConvergence after 4*bits steps.
Complex agm(const Complex& a, const Complex& b, const PrecisionContext& ctx);

/// Weight-k Eisenstein series E_k(tau), k in {2, 4, 6}, normalized with
/// constant term 1. E_2 is the quasi-modular series 1 - 24 sum sigma_1(n) q^n.
/// The series is summed in Lambert form until a term drops below 2^-(bits+8).
Complex eisenstein(int k, const Complex& tau, const PrecisionContext& ctx);

/// q * prod (1 - q^n)^24, i.e. Delta(tau) / (2 pi)^12.
Complex delta_normalized(const Complex& tau, const PrecisionContext& ctx);

/// Klein's j-invariant. tau is first moved to the standard fundamental domain.
Complex j_invariant(const Complex& tau, const PrecisionContext& ctx);

/// dj/dtau = -2 pi i E_6 j / E_4.
Complex j_derivative(const Complex& tau, const PrecisionContext& ctx);

/// Result of moving tau into the standard fundamental domain.
struct ReducedTau {
    Complex tau;
    IntMat2 gamma;  ///< tau = (a tau_in + b) / (c tau_in + d)
};

/// SL2(Z) reduction: |Re| <= 1/2 + tol, |tau| >= 1 - tol afterwards.
ReducedTau sl2_reduce(const Complex& tau, const PrecisionContext& ctx);

/// Moebius action (a tau + b) / (c tau + d).
Complex moebius(const IntMat2& g, const Complex& tau);

/// All complex roots, with multiplicity, of sum coeffs[k] x^k (constant term
/// first) by Aberth-Ehrlich simultaneous iteration.
std::vector<Complex> polyroots(const std::vector<Complex>& coeffs, const PrecisionContext& ctx);

/// max_i |p(r_i)| / sum_k |c_k| max(1,|r_i|)^k -- the backward error of a root set.
Real polyroots_residual(const std::vector<Complex>& coeffs, const std::vector<Complex>& roots);

/// Horner evaluation of sum coeffs[k] x^k.
Complex horner(const std::vector<Complex>& coeffs, const Complex& x);

}  // namespace zp
