#include "zp/periods.hpp"

#include "zp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zp {

void Lattice::validate() const {
    if (!omega1.is_finite() || !omega2.is_finite()) throw DomainError("lattice: non-finite generator");
    if (omega1.is_zero()) throw DomainError("lattice: omega1 is zero");
    if (tau().im.sign() <= 0) throw DomainError("lattice: basis must satisfy Im(omega2/omega1) > 0");
}

Lattice Lattice::from_tau(const Complex& tau, const PrecisionContext& ctx) {
    Lattice lat{ctx.cone(), tau.with_precision(ctx.bits())};
    lat.validate();
    return lat;
}

Mat2 StructuredPeriod::structural_factor(const PrecisionContext& ctx) const {
    switch (kind) {
        case Kind::Cm: return Mat2::diagonal(varpi / ctx.two_pi_i(), inverse(varpi));
        case Kind::Singular: return {d, e0, dprime, e0prime};
        case Kind::Generic: break;
    }
    return Mat2::identity(ctx.bits());
}

ReducedTau reduce_tau(const Complex& tau, const PrecisionContext& ctx) { return sl2_reduce(tau, ctx); }

namespace {

struct ReducedBasis {
    Complex w1, w2;
    IntMat2 gamma;
};

// (w2', w1') = gamma (w2, w1) with w2'/w1' in the fundamental domain.
ReducedBasis reduced_basis(const Lattice& lat, const PrecisionContext& ctx) {
    lat.validate();
    ReducedTau red = sl2_reduce(lat.tau(), ctx);
    const IntMat2& g = red.gamma;
    Complex w1 = lat.omega2 * g.c + lat.omega1 * g.d;
    Complex w2 = lat.omega2 * g.a + lat.omega1 * g.b;
    return {w1.with_precision(ctx.bits()), w2.with_precision(ctx.bits()), g};
}

}  // namespace

FullPeriodMatrix full_period_matrix(const Lattice& lat, const PrecisionContext& ctx) {
    ReducedBasis rb = reduced_basis(lat, ctx);
    Complex tau = rb.w2 / rb.w1;
    Complex e2 = eisenstein(2, tau, ctx);
    Real pi2 = ctx.pi() * ctx.pi();
    // Weierstrass quasi-periods of the reduced basis.
    Complex zeta1 = e2 * pi2 / (rb.w1 * 3L);
    Complex zeta2 = (zeta1 * rb.w2 - ctx.two_pi_i()) / rb.w1;
    const IntMat2& g = rb.gamma;
    Complex z2 = zeta2 * g.d - zeta1 * g.b;
    Complex z1 = zeta1 * g.a - zeta2 * g.c;
    FullPeriodMatrix out{{lat.omega1.with_precision(ctx.bits()), lat.omega2.with_precision(ctx.bits()), -z1, -z2},
                         ctx.zero()};
    out.legendre_residual = abs(out.p.det() - ctx.two_pi_i());
    return out;
}

std::pair<Complex, Complex> weierstrass_invariants(const Lattice& lat, const PrecisionContext& ctx) {
    ReducedBasis rb = reduced_basis(lat, ctx);
    Complex tau = rb.w2 / rb.w1;
    Real pi2 = ctx.pi() * ctx.pi();
    Real pi4 = pi2 * pi2;
    Complex w2 = rb.w1 * rb.w1;
    Complex w4 = w2 * w2;
    Complex g2 = eisenstein(4, tau, ctx) * (pi4 * 4L / 3L) / w4;
    Complex g3 = eisenstein(6, tau, ctx) * (pi4 * pi2 * 8L / 27L) / (w4 * w2);
    return {g2, g3};
}

std::optional<CmCertificate> detect_cm(const Complex& tau_in, long bound, const PrecisionContext& ctx) {
    if (!tau_in.is_finite() || tau_in.im.sign() <= 0) throw DomainError("detect_cm: tau must lie in the upper half plane");
    if (bound < 1) return std::nullopt;
    Complex tau = tau_in.with_precision(ctx.bits());
    Real trace = tau.re * 2L;
    Real nrm = norm(tau);
    Complex tau2 = tau * tau;
    Real threshold = ctx.sqrt_tol();
    Real limit = power_of_two(62, ctx.bits());
    std::optional<CmCertificate> best;
    for (long a = 1; a <= bound; ++a) {
        Real bb = -(trace * a);
        Real cc = nrm * a;
        if (abs(bb) > limit || abs(cc) > limit) break;
        long b = bb.round_to_integer().get_si();
        long c = cc.round_to_integer().get_si();
        if (std::labs(b) > bound || std::labs(c) > bound) continue;
        long g = std::gcd(std::gcd(a, std::labs(b)), std::labs(c));
        if (g != 1) continue;  // the primitive form was already tried with a smaller a
        long disc = b * b - 4 * a * c;
        if (disc >= 0) continue;
        Complex value = tau2 * a + tau * b;
        value.re += ctx.real(c);
        Real residual = abs(value);
        long scale = std::max({a, std::labs(b), std::labs(c)});
        if (residual >= threshold * scale) continue;
        if (!best || std::labs(disc) < std::labs(best->disc)) best = CmCertificate{disc, a, b, c, residual};
    }
    return best;
}

StructuredPeriod decompose_cm(const FullPeriodMatrix& P, const PrecisionContext& ctx) {
    Mat2 pp = P.p / ctx.two_pi_i();
    if (abs(pp(0, 0)) < ctx.tol()) throw DegenerateInput("decompose_cm: vanishing first period");
    StructuredPeriod sp;
    sp.kind = StructuredPeriod::Kind::Cm;
    sp.varpi = pp(0, 0) * ctx.two_pi_i();
    sp.h = pp * Mat2::diagonal(ctx.two_pi_i() / sp.varpi, sp.varpi);
    sp.h(0, 0) = ctx.cone();
    return sp;
}

Mat2 make_singular_structure(const Complex& d, const Complex& dprime, const Complex& e, const Complex& eprime,
                             const mpq_class& N, const Complex& logx, const PrecisionContext& ctx) {
    Complex nl = logx * Real(N, ctx.bits());
    Mat2 m{d, d * nl + e, dprime, dprime * nl + eprime};
    Real scale = max(max_norm(m), ctx.real(1L));
    if (abs(m.det()) < ctx.tol() * scale * scale) throw DegenerateInput("singular structure matrix is not invertible");
    return m;
}

namespace {

Complex newton_inverse_j(Complex tau, const Complex& target, const PrecisionContext& ctx, const Real& stop) {
    Real scale = max(ctx.real(1L), abs(target));
    Complex f = j_invariant(tau, ctx) - target;
    for (int it = 0; it < 200; ++it) {
        Complex step = f / j_derivative(tau, ctx);
        if (abs(f) <= stop * scale) return tau - step;
        if (abs(step) <= ldexp(stop, 8) * abs(tau)) return tau - step;
        // damped step: halve until |f| decreases and tau stays in the upper half plane
        for (int halvings = 0; halvings < 40; ++halvings) {
            Complex cand = tau - step;
            if (cand.im.sign() > 0) {
                Complex fc = j_invariant(cand, ctx) - target;
                if (abs(fc) < abs(f)) {
                    tau = sl2_reduce(cand, ctx).tau;
                    f = j_invariant(tau, ctx) - target;
                    break;
                }
            }
            step = step / 2L;
            if (halvings == 39) throw NonConvergence("inverse_j: Newton stalled");
        }
    }
    if (abs(f) <= stop * scale) return tau;
    throw NonConvergence("inverse_j: Newton did not converge");
}

}  // namespace

Complex inverse_j(const Complex& value, const PrecisionContext& ctx) {
    if (!value.is_finite()) throw DomainError("inverse_j: non-finite value");
    Complex target = value.with_precision(ctx.bits());
    Complex rho(ctx.real(-0.5), sqrt(ctx.real(3L)) / 2L);
    if (abs(target) < ctx.tol()) return rho;
    Complex c1728 = ctx.complex(ctx.real(1728L));
    if (abs(target - c1728) < ctx.tol() * 1728L) return ctx.i();

    // coarse starts on a grid of the fundamental domain at 64 bits, offset off
    // the symmetry lines where j is real and Newton cannot leave them
    PrecisionContext low(64);
    Complex tlow = target.with_precision(64);
    double ymag = std::log(std::max(1.0, abs(tlow).to_double())) / (2 * M_PI);
    double top = std::max(2.0, ymag + 1.0);
    std::vector<std::pair<double, Complex>> starts;
    const int nx = 24, ny = 48;
    for (int ix = 0; ix < nx; ++ix) {
        double x = -0.5 + (ix + 0.37) / nx;
        double ylo = std::sqrt(1.0 - x * x);
        for (int iy = 0; iy < ny; ++iy) {
            double y = ylo + (top - ylo) * (iy + 0.29) / ny;
            Complex t = low.complex(x, y);
            starts.emplace_back(abs(j_invariant(t, low) - tlow).to_double(), t);
        }
    }
    std::sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < std::min<std::size_t>(8, starts.size()); ++k) {
        try {
            Complex tau = newton_inverse_j(starts[k].second, tlow, low, power_of_two(-40, 64));
            tau = newton_inverse_j(tau.with_precision(ctx.bits()), target, ctx,
                                   power_of_two(-(3 * ctx.bits() / 4), ctx.bits()));
            return sl2_reduce(tau, ctx).tau;
        } catch (const NonConvergence&) {
        }
    }
    throw NonConvergence("inverse_j: no start point converged");
}

}  // namespace zp
