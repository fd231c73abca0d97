#include "doctest.h"
#include "oracles.hpp"

#include "zp/errors.hpp"
#include "zp/isogeny.hpp"
#include "zp/modular.hpp"

using namespace zp;

namespace {

const PrecisionContext ctx(256);

bool close(const Complex& a, const Complex& b, const Real& tol) {
    return abs(a - b) <= tol * max(ctx.real(1L), abs(b));
}

// Brute-force sum c_ik t^i (t+1)^k with plain integer convolutions.
std::vector<mpz_class> expand_shift(const ModularPolynomial& phi) {
    auto mul = [](const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
        std::vector<mpz_class> r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return r;
    };
    std::vector<mpz_class> total(1, 0);
    for (std::size_t i = 0; i < phi.coeffs.size(); ++i) {
        for (std::size_t k = 0; k < phi.coeffs.size(); ++k) {
            std::vector<mpz_class> term = {phi.coeffs[i][k]};
            for (std::size_t e = 0; e < i; ++e) term = mul(term, {0, 1});
            for (std::size_t e = 0; e < k; ++e) term = mul(term, {1, 1});
            if (term.size() > total.size()) total.resize(term.size(), 0);
            for (std::size_t e = 0; e < term.size(); ++e) total[e] += term[e];
        }
    }
    while (!total.empty() && total.back() == 0) total.pop_back();
    return total;
}

}  // namespace

TEST_CASE("numeric evaluation vanishes at isogenous pairs") {
    Complex tau = ctx.complex(0.17, 1.09);
    Complex x = j_invariant(tau, ctx);
    CHECK(abs(phi_eval_numeric(1, x, tau, ctx)) < ctx.tol());
    Complex v = phi_eval_numeric(2, ctx.complex(287496.0, 0.0), ctx.i(), ctx);
    CHECK(abs(v) < ctx.tol() * 1e15);
    for (long N = 2; N <= 7; ++N) {
        Complex jn = j_invariant(tau * N, ctx);
        Real scale = ctx.real(1L);
        for (const auto& r : isogenous_j_values(N, tau, ctx)) scale *= max(ctx.real(1L), abs(jn) + abs(r));
        CHECK(abs(phi_eval_numeric(N, jn, tau, ctx)) < ctx.tol() * scale);
    }
}

TEST_CASE("recovered Phi_2 is the classical table") {
    const ModularPolynomial& phi = modular_polynomial(2);
    CHECK(phi.degree() == 3);
    CHECK(phi.is_symmetric());
    CHECK(phi.provenance == ModularPolynomial::Provenance::Recovered);
    auto c = [&](int i, int k) { return phi.coeffs[i][k]; };
    CHECK(c(3, 0) == 1);
    CHECK(c(2, 2) == -1);
    CHECK(c(2, 1) == 1488);
    CHECK(c(2, 0) == -162000);
    CHECK(c(1, 1) == 40773375);
    CHECK(c(1, 0) == 8748000000L);
    CHECK(c(0, 0) == mpz_class("-157464000000000"));
    CHECK(c(3, 3) == 0);
    CHECK(phi.eval(mpz_class(1728), mpz_class(287496)) == 0);
    CHECK(phi.eval(mpz_class(287496), mpz_class(1728)) == 0);
    CHECK(phi.eval(mpz_class(8000), mpz_class(8000)) == 0);  // sqrt(-2) has an endomorphism of degree 2
}

TEST_CASE("recovered Phi_3 matches known coefficients") {
    const ModularPolynomial& phi = modular_polynomial(3);
    CHECK(phi.degree() == 4);
    CHECK(phi.is_symmetric());
    CHECK(phi.coeffs[4][0] == 1);
    CHECK(phi.coeffs[3][3] == -1);
    CHECK(phi.coeffs[3][2] == 2232);
    CHECK(phi.coeffs[3][1] == -1069956);
    CHECK(phi.coeffs[3][0] == 36864000);
    CHECK(phi.coeffs[2][2] == mpz_class("2587918086"));
    CHECK(phi.coeffs[1][1] == mpz_class("-770845966336000000"));
    CHECK(phi.coeffs[1][0] == mpz_class("1855425871872000000000"));
    CHECK(phi.coeffs[0][0] == 0);
    CHECK(phi.eval(mpz_class(0), mpz_class(-12288000)) == 0);
}

TEST_CASE("levels 4 and 5: shape, symmetry and vanishing at random isogenous pairs") {
    std::mt19937_64 rng(44);
    for (long N : {4L, 5L}) {
        const ModularPolynomial& phi = modular_polynomial(N);
        CHECK(phi.degree() == psi(N));
        CHECK(phi.is_symmetric());
        CHECK(phi.coeffs[static_cast<std::size_t>(psi(N))][0] == 1);
        for (int k = 0; k < 5; ++k) {
            Complex tau = ctx.complex(oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, 0.9, 1.4));
            Complex x = j_invariant(tau, ctx), y = j_invariant(tau * N, ctx);
            Real scale = pow(max(ctx.real(1L), abs(x)) * max(ctx.real(1L), abs(y)), psi(N));
            CHECK(abs(phi.eval(x, y)) < ctx.tol() * scale);
        }
    }
}

TEST_CASE("numeric and exact evaluation agree") {
    std::mt19937_64 rng(8);
    for (long N : {2L, 3L}) {
        const ModularPolynomial& phi = modular_polynomial(N);
        for (int k = 0; k < 20; ++k) {
            Complex tau = ctx.complex(oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, 0.9, 1.6));
            Complex x = ctx.complex(oracle::uniform(rng, -3000, 3000), oracle::uniform(rng, -3000, 3000));
            Complex numeric = phi_eval_numeric(N, x, tau, ctx);
            Complex exact = phi.eval(x, j_invariant(tau, ctx));
            CHECK(close(numeric, exact, ctx.tol()));
        }
    }
}

TEST_CASE("roots of Phi_N(X, j(tau)) are the isogenous j-values") {
    Complex tau = ctx.complex(0.21, 1.13);
    for (long N : {2L, 3L}) {
        auto roots = polyroots(modular_polynomial(N).specialize_y(j_invariant(tau, ctx)), ctx);
        auto want = isogenous_j_values(N, tau, ctx);
        REQUIRE(roots.size() == want.size());
        for (const auto& w : want) {
            Real best = abs(roots[0] - w);
            for (const auto& r : roots) best = min(best, abs(r - w));
            CHECK(best < ctx.sqrt_tol() * max(ctx.real(1L), abs(w)));
        }
    }
}

TEST_CASE("specialization along rational maps") {
    ModularPolynomial x_minus_y = ModularPolynomial::supplied(1, {{0, -1}, {1, 0}});
    RatFunc t(IntPoly({0, 1}), IntPoly::constant(1));
    RatFunc t1(IntPoly({1, 1}), IntPoly::constant(1));
    CHECK_THROWS_AS(phi_specialize(x_minus_y, t, t), DegenerateInput);
    CHECK(phi_specialize(x_minus_y, t, t1) == IntPoly::constant(1));

    const ModularPolynomial& phi2 = modular_polynomial(2);
    IntPoly s = phi_specialize(phi2, t, t1);
    IntPoly brute = IntPoly(expand_shift(phi2)).primitive();
    CHECK(s == brute);
    CHECK(s.degree() == 4);

    // denominators: f = 1/t, g = t gives t^3 Phi_2(1/t, t), no factor of t left over
    RatFunc inv(IntPoly::constant(1), IntPoly({0, 1}));
    IntPoly q = phi_specialize(phi2, inv, t);
    CHECK(q.coeff(0) != 0);
    CHECK_THROWS_AS(ModularPolynomial::supplied(2, {{1, 2}, {3, 4}}), ParseError);
}
