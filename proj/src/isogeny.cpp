#include "zp/isogeny.hpp"

#include "zp/errors.hpp"

#include <numeric>

namespace zp {

long psi(long M) {
    if (M < 1) throw DomainError("psi: level must be positive");
    long r = M, m = M;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        while (m % p == 0) m /= p;
        r = r / p * (p + 1);
    }
    if (m > 1) r = r / m * (m + 1);
    return r;
}

std::vector<CyclicSublattice> cyclic_sublattices(long M) {
    if (M < 1) throw DomainError("cyclic_sublattices: degree must be positive");
    std::vector<CyclicSublattice> out;
    for (long a = 1; a <= M; ++a) {
        if (M % a != 0) continue;
        long d = M / a;
        for (long b = 0; b < d; ++b) {
            if (std::gcd(std::gcd(a, b), d) == 1) out.push_back({a, b, d});
        }
    }
    return out;
}

IsogenyPair isogeny_pair(const Lattice& lat, const CyclicSublattice& sub, const PrecisionContext& ctx) {
    lat.validate();
    if (sub.a < 1 || sub.d < 1 || sub.b < 0 || sub.b >= sub.d || std::gcd(std::gcd(sub.a, sub.b), sub.d) != 1) {
        throw DomainError("isogeny_pair: not a primitive Hermite normal form");
    }
    Complex u1 = lat.omega1 * sub.a + lat.omega2 * sub.b;
    Complex u2 = lat.omega2 * sub.d;
    ReducedTau red = sl2_reduce(u2 / u1, ctx);
    const IntMat2& g = red.gamma;
    Lattice target{u2 * g.c + u1 * g.d, u2 * g.a + u1 * g.b};
    // coordinates (x, y) in (u1, u2) equal G (x'', y'') in the reduced basis
    IntMat2 G{g.d, g.b, g.c, g.a};
    IntMat2 B0{sub.d, 0, -sub.b, sub.a};
    return {target, unimodular_inverse(G) * B0, g};
}

IntMat2 dual_homology(const CyclicSublattice& sub, const IsogenyPair& pair) {
    const IntMat2& g = pair.target_gamma;
    IntMat2 G{g.d, g.b, g.c, g.a};
    return IntMat2{sub.a, 0, sub.b, sub.d} * G;
}

DeRham solve_de_rham(const FullPeriodMatrix& P1, const FullPeriodMatrix& P2, const IntMat2& homology,
                     const PrecisionContext& ctx) {
    Complex det = P1.p.det();
    if (abs(det) < ctx.tol() * max(ctx.real(1L), max_norm(P1.p))) throw DegenerateInput("solve_de_rham: P1 is singular");
    Mat2 A = P2.p * Mat2::from_int(homology, ctx.bits()) * inverse(P1.p);
    Real upper = abs(A(0, 1));
    if (upper >= ctx.tol() * max(ctx.real(1L), max_norm(A))) {
        throw StructureViolation("solve_de_rham: pullback is not lower triangular; homology inconsistent with lattices");
    }
    return {A(0, 0), A(1, 0), A(1, 1), upper};
}

bool PeriodIdentityCheck::passed(const PrecisionContext& ctx) const {
    return homology_det_ok && residual < ctx.tol() * max(ctx.real(1L), scale) && det_residual < ctx.tol();
}

PeriodIdentityCheck verify_period_identity(const IsogenyWitness& w, const FullPeriodMatrix& P1, const FullPeriodMatrix& P2,
                            const PrecisionContext& ctx) {
    Mat2 A{w.de_rham.a, ctx.czero(), w.de_rham.b, w.de_rham.c};
    Mat2 diff = A * P1.p - P2.p * Mat2::from_int(w.homology, ctx.bits());
    PeriodIdentityCheck out;
    out.residual = max_norm(diff);
    out.scale = max_norm(P2.p);
    out.det_residual = abs(w.de_rham.a * w.de_rham.c - ctx.complex(ctx.real(w.M)));
    out.homology_det_ok = w.homology.det() == w.M;
    return out;
}

IsogenyRecord build_isogeny(const Lattice& lat, const CyclicSublattice& sub, const PrecisionContext& ctx) {
    IsogenyRecord rec;
    rec.sub = sub;
    IsogenyPair pair = isogeny_pair(lat, sub, ctx);
    rec.target = pair.target;
    rec.P1 = full_period_matrix(lat, ctx);
    rec.P2 = full_period_matrix(pair.target, ctx);
    rec.witness.M = sub.M();
    rec.witness.homology = pair.homology;
    rec.witness.de_rham = solve_de_rham(rec.P1, rec.P2, pair.homology, ctx);
    rec.check = verify_period_identity(rec.witness, rec.P1, rec.P2, ctx);
    rec.witness.residual = rec.check.residual;
    return rec;
}

namespace {

std::optional<std::array<long, 3>> normalized(long A, long B, long C) {
    long g = std::gcd(std::gcd(std::labs(A), std::labs(B)), std::labs(C));
    if (g == 0) return std::nullopt;
    A /= g, B /= g, C /= g;
    long first = A != 0 ? A : (B != 0 ? B : C);
    if (first < 0) A = -A, B = -B, C = -C;
    return std::array<long, 3>{A, B, C};
}

}  // namespace

std::optional<std::array<long, 3>> recognize_quadratic(const Complex& z_in, long bound, const PrecisionContext& ctx) {
    Complex z = z_in.with_precision(ctx.bits());
    Real thr = ctx.sqrt_tol();
    Real limit = ctx.real(static_cast<long>(bound) + 1L);
    if (abs(z) > limit * limit) return std::nullopt;
    auto residual = [&](long A, long B, long C) {
        Complex v = z * z * A + z * B;
        v.re += ctx.real(C);
        return abs(v);
    };
    bool real_line = abs(z.im) < thr;
    std::optional<std::array<long, 3>> best;
    // rationals: B z + C = 0
    for (long B = 1; B <= bound && real_line; ++B) {
        Real c = -(z.re * B);
        if (abs(c) > limit) break;
        long C = c.round_to_integer().get_si();
        if (std::labs(C) <= bound && residual(0, B, C) < thr * std::max(B, std::labs(C))) return normalized(0, B, C);
    }
    for (long A = 1; A <= bound; ++A) {
        if (!real_line) {
            long B = (-(z.re * 2L * A)).round_to_integer().get_si();
            long C = (norm(z) * A).round_to_integer().get_si();
            if (std::labs(B) <= bound && std::labs(C) <= bound &&
                residual(A, B, C) < thr * std::max({A, std::labs(B), std::labs(C)})) {
                return normalized(A, B, C);
            }
            continue;
        }
        for (long B = -bound; B <= bound; ++B) {
            Real c = -(z.re * z.re * A + z.re * B);
            if (abs(c) > limit) continue;
            long C = c.round_to_integer().get_si();
            if (std::labs(C) > bound) continue;
            if (residual(A, B, C) < thr * std::max({A, std::labs(B), std::labs(C)})) {
                if (!best) best = normalized(A, B, C);
            }
        }
        if (best) return best;
    }
    return std::nullopt;
}

}  // namespace zp
