#include "selftest.hpp"

#include "zp/errors.hpp"

#include <functional>
#include <random>
#include <sstream>

namespace zp {

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const Real& x) { return x.to_string(4); }

Outcome legendre(const PrecisionContext& ctx, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Real worst = ctx.zero();
    for (int t = 0; t < 5; ++t) {
        Complex w1 = ctx.complex(1.0 + 0.5 * u(rng), 0.5 * u(rng));
        Complex tau = ctx.complex(0.5 * u(rng), 1.2 + 0.4 * u(rng));
        auto P = full_period_matrix({w1, w1 * tau}, ctx);
        worst = max(worst, abs(P.p.det() - ctx.two_pi_i()));
    }
    return {worst < ctx.tol() * abs(ctx.two_pi_i()), "max |det - 2 pi i| = " + fmt(worst)};
}

Outcome isogenies(const PrecisionContext& ctx, std::uint64_t seed) {
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    int count = 0;
    for (int t = 0; t < 2; ++t) {
        Lattice lat{ctx.complex(1.0 + u(rng), u(rng)), ctx.complex(u(rng), 1.3 + u(rng))};
        for (long M = 1; M <= 6; ++M)
            for (const auto& sub : cyclic_sublattices(M)) {
                auto rec = build_isogeny(lat, sub, ctx);
                if (!rec.check.passed(ctx)) return {false, "witness failed at M = " + std::to_string(M)};
                ++count;
            }
    }
    return {true, std::to_string(count) + " witnesses verified"};
}

Outcome special_values(const PrecisionContext& ctx, std::uint64_t) {
    Real e1 = abs(j_invariant(ctx.i(), ctx) - 1728L);
    Real e2 = abs(j_invariant(Complex(ctx.real(0L), sqrt(ctx.real(2L))), ctx) - 8000L);
    return {max(e1, e2) < ctx.tol() * 8000L, "|j(i) - 1728|, |j(sqrt -2) - 8000| <= " + fmt(max(e1, e2))};
}

Outcome phi2(const PrecisionContext&, std::uint64_t) {
    const auto& phi = modular_polynomial(2);
    bool ok = phi.is_symmetric() && phi.degree() == 3 && phi.coeffs[2][1] == 1488 && phi.coeffs[1][1] == 40773375 &&
              phi.coeffs[0][0] == mpz_class("-157464000000000") && phi.eval(mpz_class(1728), mpz_class(287496)) == 0;
    return {ok, "Phi_2 table, symmetry and Phi_2(1728, 287496) = 0"};
}

Outcome resultants(const PrecisionContext&, std::uint64_t) {
    IntPoly p({1, 0, 1}), q({-2, 0, 1});
    bool ok = resultant(p, q) == 9 && gcd(IntPoly({-1, 0, 1}), IntPoly({-1, 1})) == IntPoly({-1, 1});
    return {ok, "res(x^2 + 1, x^2 - 2) = 9"};
}

Outcome relations(const PrecisionContext& ctx, std::uint64_t seed) {
    int n = 0;
    for (std::uint64_t s = seed; s < seed + 4; ++s) {
        SyntheticOptions o;
        o.degree = 2 + static_cast<long>(s % 3);
        o.random_pi = s % 2 == 0;
        std::vector<RelationInstance> insts = {synthetic_first_way(s, o, ctx), synthetic_second_way(s, o, ctx),
                                               synthetic_four_coordinate(s, o, o, ctx)};
        for (const auto& inst : insts) {
            auto w = evaluate_instance(inst, ctx);
            auto pc = check_polynomial(w, inst, 5, s, ctx);
            if (!w.holds(ctx) || !polynomial_check_passed(pc, ctx))
                return {false, "relation failed for seed " + std::to_string(s)};
            ++n;
        }
    }
    auto g = genuine_second_way(ctx.i(), {1, 1, 3}, ctx);
    auto w = second_way(g.coord(2), g.coord(3), g.links[0].witness, ctx);
    if (!w.holds(ctx)) return {false, "genuine CM second way failed"};
    return {true, std::to_string(n) + " synthetic relations and one genuine CM pair verified with certificates"};
}

Outcome scanner(const PrecisionContext& ctx, std::uint64_t) {
    auto curve = parse_curve_text("n = 3\nj1 = -1 1\nj2 = 53993 7\nj3 = -12288005 5\n");
    ScanOptions opt;
    opt.levels = {2, 3};
    opt.single_stratum = false;
    opt.flag_singular_moduli = false;
    auto res = scan(curve, opt, ctx);
    bool ok = res.double_count() == 1 && res.points[0].points.defining == IntPoly::linear(-1, 1);
    return {ok, "engineered curve: " + std::to_string(res.double_count()) + " double-stratum point(s)"};
}

}  // namespace

json run_selftest(const PrecisionContext& ctx, const RunInfo& run) {
    std::vector<std::pair<std::string, std::function<Outcome(const PrecisionContext&, std::uint64_t)>>> checks = {
        {"legendre", legendre},   {"isogeny_witnesses", isogenies}, {"special_j_values", special_values},
        {"phi2_table", phi2},     {"resultants", resultants},       {"relations", relations},
        {"scanner", scanner},
    };
    json out = header("zp.selftest/1", run);
    json list = json::array();
    bool all = true;
    for (const auto& [name, fn] : checks) {
        Outcome o;
        try {
            o = fn(ctx, run.seed);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.passed;
        list.push_back({{"name", name}, {"passed", o.passed}, {"detail", o.detail}});
    }
    out["checks"] = list;
    out["passed"] = all;
    return out;
}

}  // namespace zp
