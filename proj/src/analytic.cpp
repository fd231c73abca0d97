#include "zp/analytic.hpp"

#include "zp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zp {

namespace {

void require_upper_half_plane(const Complex& tau, const char* what) {
    if (!tau.is_finite() || tau.im.sign() <= 0) {
        throw DomainError(std::string(what) + ": tau must lie in the upper half plane");
    }
}

/// exp(2 pi i tau), with Re(tau) folded into [0, 1) first.
Complex nome(const Complex& tau, const PrecisionContext& ctx) {
    Real x = tau.re - floor(tau.re);
    Real two_pi = ctx.pi() * 2L;
    Real angle = two_pi * x;
    Real modulus = exp(-(two_pi * tau.im));
    Real s(ctx.bits()), c(ctx.bits());
    mpfr_sin_cos(s.raw(), c.raw(), angle.raw(), MPFR_RNDN);
    return {modulus * c, modulus * s};
}

}  // namespace

Complex agm(const Complex& a0, const Complex& b0, const PrecisionContext& ctx) {
    if (a0.is_zero() || b0.is_zero()) throw DomainError("agm: arguments must be nonzero");
    Complex a = a0.with_precision(ctx.bits());
    Complex b = b0.with_precision(ctx.bits());
    Real eps = power_of_two(-(ctx.bits() - 8), ctx.bits());
    const int max_steps = 4 * ctx.bits();
    for (int step = 0; step < max_steps; ++step) {
        Real gap = abs(a - b);
        if (gap <= eps * abs(a)) return a;
        Complex next_a = (a + b) / 2L;
        Complex root = sqrt(a * b);
        Real minus = abs(next_a - root);
        Real plus = abs(next_a + root);
        if (plus < minus || (plus == minus && root.re.sign() < 0)) root = -root;
        a = std::move(next_a);
        b = std::move(root);
        if (a.is_zero()) throw NonConvergence("agm: iterate collapsed to zero");
    }
    if (abs(a - b) < ctx.tol() * abs(a)) return a;
    throw NonConvergence("agm: no convergence within 4*bits steps");
}

Complex eisenstein(int k, const Complex& tau, const PrecisionContext& ctx) {
    require_upper_half_plane(tau, "eisenstein");
    long coeff = 0;
    switch (k) {
        case 2: coeff = -24; break;
        case 4: coeff = 240; break;
        case 6: coeff = -504; break;
        default: throw DomainError("eisenstein: weight must be 2, 4 or 6");
    }
    Complex q = nome(tau, ctx);
    Real qabs = abs(q);
    // Terms n^(k-1) |q|^n grow until n ~ (k-1)/log(1/|q|); only stop after that.
    double log_inv_q = -std::log(qabs.to_double());
    double peak = log_inv_q > 0 ? (k - 1) / log_inv_q : 0.0;
    Real threshold = power_of_two(-(ctx.bits() + 8), ctx.bits()) / std::abs(coeff);

    Complex sum = ctx.czero();
    Complex qn = q;
    for (std::size_t n = 1;; ++n) {
        if (n > ctx.max_terms()) throw NonConvergence("eisenstein: q-series exceeded max_terms");
        long weight = 1;
        for (int e = 0; e < k - 1; ++e) weight *= static_cast<long>(n);
        Complex term = qn / (ctx.cone() - qn) * weight;
        sum += term;
        if (static_cast<double>(n) >= peak && abs(term) < threshold) break;
        qn *= q;
    }
    return ctx.cone() + sum * coeff;
}

Complex delta_normalized(const Complex& tau, const PrecisionContext& ctx) {
    require_upper_half_plane(tau, "delta");
    Complex q = nome(tau, ctx);
    Real threshold = power_of_two(-(ctx.bits() + 8), ctx.bits()) / 24L;
    Complex prod = ctx.cone();
    Complex qn = q;
    for (std::size_t n = 1;; ++n) {
        if (n > ctx.max_terms()) throw NonConvergence("delta: product exceeded max_terms");
        prod *= ctx.cone() - qn;
        if (abs(qn) < threshold) break;
        qn *= q;
    }
    return q * pow(prod, 24);
}

Complex j_invariant(const Complex& tau, const PrecisionContext& ctx) {
    require_upper_half_plane(tau, "j_invariant");
    ReducedTau red = sl2_reduce(tau, ctx);
    Complex e4 = eisenstein(4, red.tau, ctx);
    return pow(e4, 3) / delta_normalized(red.tau, ctx);
}

Complex j_derivative(const Complex& tau, const PrecisionContext& ctx) {
    require_upper_half_plane(tau, "j_derivative");
    Complex e4 = eisenstein(4, tau, ctx);
    Complex e6 = eisenstein(6, tau, ctx);
    if (e4.is_zero()) return ctx.czero();
    return -(ctx.two_pi_i() * e6 * j_invariant(tau, ctx) / e4);
}

Complex moebius(const IntMat2& g, const Complex& tau) {
    mpfr_prec_t bits = tau.precision();
    auto lift = [bits](std::int64_t v) { return Real(static_cast<long>(v), bits); };
    Complex num = tau * lift(g.a);
    num.re += lift(g.b);
    Complex den = tau * lift(g.c);
    den.re += lift(g.d);
    return num / den;
}

ReducedTau sl2_reduce(const Complex& tau_in, const PrecisionContext& ctx) {
    require_upper_half_plane(tau_in, "reduce_tau");
    Complex tau = tau_in.with_precision(ctx.bits());
    IntMat2 gamma = IntMat2::identity();
    const Real one_minus_tol = Real(1L, ctx.bits()) - ctx.tol();
    const Real half = Real(0.5, ctx.bits());
    const Real limit = power_of_two(62, ctx.bits());
    for (int iter = 0; iter < 100000; ++iter) {
        Real shifted = floor(tau.re + half);
        if (abs(shifted) > limit) throw DomainError("reduce_tau: real part too large");
        long n = static_cast<long>(shifted.round_to_integer().get_si());
        if (n != 0) {
            tau.re -= Real(n, ctx.bits());
            gamma = IntMat2{1, -n, 0, 1} * gamma;
        }
        Real r2 = norm(tau);
        if (r2 < one_minus_tol) {
            tau = Complex(-tau.re / r2, tau.im / r2);
            gamma = IntMat2{0, -1, 1, 0} * gamma;
            continue;
        }
        return {tau, gamma};
    }
    throw NonConvergence("reduce_tau: too many reduction steps");
}

Complex horner(const std::vector<Complex>& coeffs, const Complex& x) {
    Complex acc(x.precision());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc *= x;
        acc += *it;
    }
    return acc;
}

namespace {

/// Initial radii from the upper convex hull of (k, log|a_k|) (Bini's rule):
/// for each hull edge (i, j) there are j - i roots of modulus about
/// (|a_i| / |a_j|)^(1/(j-i)).
std::vector<Complex> aberth_start(const std::vector<Complex>& a, const PrecisionContext& ctx) {
    const int n = static_cast<int>(a.size()) - 1;
    std::vector<double> lg(a.size());
    for (int k = 0; k <= n; ++k) {
        lg[k] = a[k].is_zero() ? -1e300 : abs(a[k]).log2_abs();
    }
    std::vector<int> hull;
    for (int k = 0; k <= n; ++k) {
        if (lg[k] <= -1e299) continue;
        while (hull.size() >= 2) {
            int i = hull[hull.size() - 2], j = hull.back();
            // drop j if it lies on or below segment i -> k
            double cross = (lg[j] - lg[i]) * (k - i) - (lg[k] - lg[i]) * (j - i);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(k);
    }
    std::vector<Complex> z;
    z.reserve(n);
    const double sigma = 0.7;
    Real two_pi = ctx.pi() * 2L;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        int i = hull[h], j = hull[h + 1];
        int m = j - i;
        double log2_radius = (lg[i] - lg[j]) / m;
        Real radius = power_of_two(0, ctx.bits());
        mpfr_exp2(radius.raw(), Real(log2_radius, ctx.bits()).raw(), MPFR_RNDN);
        for (int t = 0; t < m; ++t) {
            Real angle = two_pi * Real(static_cast<double>(t) / m, ctx.bits()) +
                         Real(2.0 * M_PI * static_cast<double>(h) / n + sigma, ctx.bits());
            z.emplace_back(radius * cos(angle), radius * sin(angle));
        }
    }
    return z;
}

}  // namespace

std::vector<Complex> polyroots(const std::vector<Complex>& coeffs_in, const PrecisionContext& ctx) {
    std::vector<Complex> coeffs;
    coeffs.reserve(coeffs_in.size());
    for (const auto& c : coeffs_in) coeffs.push_back(c.with_precision(ctx.bits()));
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.size() < 2) throw DomainError("polyroots: degree must be at least 1 with nonzero leading coefficient");
    if (coeffs_in.back().is_zero()) throw DomainError("polyroots: leading coefficient is zero");

    std::vector<Complex> roots;
    // Exact zero roots are split off so relative stopping tests stay meaningful.
    std::size_t zeros = 0;
    while (coeffs[zeros].is_zero()) ++zeros;
    for (std::size_t k = 0; k < zeros; ++k) roots.push_back(ctx.czero());
    std::vector<Complex> a(coeffs.begin() + static_cast<long>(zeros), coeffs.end());
    const std::size_t n = a.size() - 1;
    if (n == 0) return roots;
    if (n == 1) {
        roots.push_back(-(a[0] / a[1]));
        return roots;
    }

    std::vector<Complex> abs_coeffs;
    for (const auto& c : a) abs_coeffs.push_back(Complex(abs(c)));
    std::vector<Complex> deriv;
    for (std::size_t k = 1; k <= n; ++k) deriv.push_back(a[k] * static_cast<long>(k));

    std::vector<Complex> z = aberth_start(a, ctx);
    std::vector<bool> done(n, false);
    const Real eps = power_of_two(-(ctx.bits() - 6), ctx.bits());
    const Real backward = eps * static_cast<long>(8 * n);
    for (int sweep = 0; sweep < 1000; ++sweep) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            Complex p = horner(a, z[i]);
            Real scale = abs(horner(abs_coeffs, Complex(abs(z[i]))));
            if (abs(p) <= backward * scale) {
                done[i] = true;
                continue;
            }
            Complex dp = horner(deriv, z[i]);
            Complex ratio = p / dp;
            Complex repel = ctx.czero();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) repel += inverse(z[i] - z[j]);
            }
            Complex w = ratio / (ctx.cone() - ratio * repel);
            z[i] -= w;
            if (abs(w) <= eps * abs(z[i])) done[i] = true;
            else all = false;
        }
        if (all && std::all_of(done.begin(), done.end(), [](bool b) { return b; })) {
            roots.insert(roots.end(), z.begin(), z.end());
            if (polyroots_residual(coeffs, roots) >= ctx.tol()) {
                throw NonConvergence("polyroots: converged roots fail the residual check");
            }
            return roots;
        }
    }
    throw NonConvergence("polyroots: no convergence after 1000 sweeps");
}

Real polyroots_residual(const std::vector<Complex>& coeffs, const std::vector<Complex>& roots) {
    mpfr_prec_t bits = coeffs.front().precision();
    Real worst(bits);
    std::vector<Complex> abs_coeffs;
    for (const auto& c : coeffs) abs_coeffs.push_back(Complex(abs(c)));
    for (const auto& r : roots) {
        Real m = max(Real(1L, bits), abs(r));
        Real value = abs(horner(coeffs, r));
        Real scale = abs(horner(abs_coeffs, Complex(m)));
        if (scale.is_zero()) continue;
        worst = max(worst, value / scale);
    }
    return worst;
}

}  // namespace zp
