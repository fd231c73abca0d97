#include "doctest.h"
#include "oracles.hpp"

#include "zp/errors.hpp"
#include "zp/scanner.hpp"

using namespace zp;

namespace {

const PrecisionContext ctx(256);

const char* kEngineered = "n = 3\nj1 = -1 1\nj2 = 53993 7\nj3 = -12288005 5\n";

IntPoly lin(long a, long b) { return IntPoly::linear(a, b); }

// Phi(f, g) expanded by brute force for polynomial maps
IntPoly expand_phi(const ModularPolynomial& phi, const IntPoly& f, const IntPoly& g) {
    IntPoly acc;
    for (int i = 0; i <= phi.degree(); ++i)
        for (int k = 0; k < static_cast<int>(phi.coeffs[i].size()); ++k)
            if (phi.coeffs[i][k] != 0) acc = acc + pow(f, i) * pow(g, k) * phi.coeffs[i][k];
    return acc;
}

}  // namespace

TEST_CASE("curve parsing") {
    auto c = parse_curve_text("# comment\nn = 2\nj1 = [0, 1]\nj2 = 1 1 / 2  # (1 + t)/2\nrole2 = cm\n");
    CHECK(c.n == 2);
    CHECK(c.maps[0].num == lin(0, 1));
    CHECK(c.maps[1].den == IntPoly::constant(2));
    REQUIRE(c.roles.size() == 2);
    CHECK(c.roles[0] == "smooth");
    CHECK(c.roles[1] == "cm");
    CHECK_THROWS_AS(parse_curve_text("j1 = 0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_curve_text("n = 2\nj1 = 0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_curve_text("n = 2\nj1 = 0 x\nj2 = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_curve_text("n = 2\nj1 = 0 1 / 0\nj2 = 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_curve_text("n = 2\nj1 = 0 1\nj2 = 5\n"), DomainError);
    CHECK_THROWS_AS(parse_curve_text("n = 2\nj1 = 0 1\nj2 = 0 1\n"), DomainError);
    CHECK_NOTHROW(parse_curve_text("n = 2\nallow_equal = true\nj1 = 0 1\nj2 = 0 1\n"));
    CHECK_THROWS_AS(parse_curve_text("n = 2\nj1 = 0 1\nj2 = 1 1\nfoo = 3\n"), ParseError);
}

TEST_CASE("level parsing") {
    CHECK(parse_levels("2..5") == std::vector<long>{2, 3, 4, 5});
    CHECK(parse_levels("2,3,7") == std::vector<long>{2, 3, 7});
    CHECK_THROWS_AS(parse_levels("5..2"), ParseError);
    CHECK_THROWS_AS(parse_levels("a"), ParseError);
}

TEST_CASE("stratum polynomials") {
    auto diag = parse_curve_text("n = 2\nallow_equal = true\nj1 = 0 1\nj2 = 0 1\n");
    CHECK_THROWS_AS(stratum_poly(diag, 1, 2, 1), DegenerateInput);

    auto shift = parse_curve_text("n = 2\nj1 = 0 1\nj2 = 1 1\n");
    IntPoly s1 = stratum_poly(shift, 1, 2, 1);
    CHECK(s1.degree() == 0);

    IntPoly s2 = stratum_poly(shift, 1, 2, 2);
    IntPoly oracle = expand_phi(modular_polynomial(2), lin(0, 1), lin(1, 1)).primitive();
    CHECK(s2 == oracle);
    CHECK(s2.degree() == 4);
    auto pts = isolate_points(s2, ctx);
    CHECK(static_cast<int>(pts.roots.size()) == s2.degree());

    // denominators: j2 = 1/t, roots of the denominator are excluded
    auto rat = parse_curve_text("n = 2\nj1 = 0 1\nj2 = 1 / 0 1\n");
    IntPoly s3 = stratum_poly(rat, 1, 2, 2);
    CHECK(s3.eval(mpz_class(0)) != 0);
    for (const auto& r : isolate_points(s3, ctx).roots)
        CHECK(phi_relative_value(modular_polynomial(2), rat.maps[0].eval(r), rat.maps[1].eval(r)) < ctx.sqrt_tol());
}

TEST_CASE("single stratum scan on (t, t+1)") {
    auto shift = parse_curve_text("n = 2\nj1 = 0 1\nj2 = 1 1\n");
    auto pts = unlikely_points(shift, {2}, {}, ctx);
    REQUIRE(pts.size() == 1);
    const auto& p = pts[0];
    CHECK(!p.pair2);
    IntPoly sf = squarefree(stratum_poly(shift, 1, 2, 2));
    CHECK(p.points.defining == sf);
    CHECK(static_cast<int>(p.points.roots.size()) == sf.degree());
    CHECK(p.soundness < ctx.sqrt_tol());
    CHECK(abs(p.height_t - mahler_height(sf, ctx)) < ctx.tol());
    // j1 = t, so its height is that of t; j2 = t + 1 has the shifted polynomial
    CHECK(abs(p.heights_j[0] - p.height_t) < ctx.tol());
}

TEST_CASE("engineered double stratum point") {
    auto curve = parse_curve_text(kEngineered);
    // the construction: Phi_2(0, 54000) = Phi_3(0, -12288000) = 0 exactly
    CHECK(modular_polynomial(2).eval(mpz_class(0), mpz_class(54000)) == 0);
    CHECK(modular_polynomial(3).eval(mpz_class(0), mpz_class(-12288000)) == 0);
    IntPoly a = stratum_poly(curve, 1, 2, 2), b = stratum_poly(curve, 1, 3, 3);
    CHECK(gcd(a, b) == lin(-1, 1));

    ScanOptions opt;
    opt.levels = {2, 3};
    auto res = scan(curve, opt, ctx);
    REQUIRE(res.double_count() == 1);
    const auto& p = res.points[0];
    REQUIRE(p.pair2);
    CHECK(p.pair1 == LevelPair{1, 2, 2});
    CHECK(*p.pair2 == LevelPair{1, 3, 3});
    CHECK(p.points.degree_bound == 1);
    CHECK(p.points.defining == lin(-1, 1));
    CHECK(abs(p.height_t) < ctx.tol());
    CHECK(p.soundness < ctx.sqrt_tol());
    // 0, 54000, -12288000 are singular moduli
    CHECK(p.singular_modulus == std::vector<bool>{true, true, true});
    for (const auto& pt : res.points) {
        CHECK(divides(pt.points.defining, stratum_poly(curve, pt.pair1.i1, pt.pair1.i2, pt.pair1.M)));
        if (pt.pair2) CHECK(divides(pt.points.defining, stratum_poly(curve, pt.pair2->i1, pt.pair2->i2, pt.pair2->M)));
        CHECK(static_cast<int>(pt.points.roots.size()) <= pt.points.defining.degree());
        CHECK(pt.soundness < ctx.sqrt_tol());
    }
    // threads do not change the result
    opt.jobs = 3;
    auto par = scan(curve, opt, ctx);
    REQUIRE(par.points.size() == res.points.size());
    for (std::size_t i = 0; i < par.points.size(); ++i) CHECK(par.points[i].points.defining == res.points[i].points.defining);
}

TEST_CASE("generic curve has no double stratum points") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 3; ++trial) {
        CurveModel c;
        c.n = 3;
        for (int i = 0; i < 3; ++i) {
            std::vector<mpz_class> num;
            for (int d = 0; d < 2; ++d) num.emplace_back(static_cast<long>(rng() % 41) - 20);
            num.emplace_back(static_cast<long>(rng() % 9) + 1);
            c.maps.emplace_back(IntPoly(num), IntPoly::constant(1));
        }
        ScanOptions opt;
        opt.levels = {2, 3};
        opt.single_stratum = false;
        CHECK(scan(c, opt, ctx).double_count() == 0);
    }
}

TEST_CASE("numeric-only levels") {
    auto curve = parse_curve_text(kEngineered);
    ScanOptions opt;
    opt.levels = {2, 6};
    opt.pairs = {{1, 2}, {2, 3}};
    opt.flag_singular_moduli = false;
    auto res = scan(curve, opt, ctx);
    CHECK(res.double_count() == 0);  // level 6 never enters the exact gcd
    bool found = false;
    for (const auto& h : res.numeric_only) {
        CHECK(h.numeric_pair.M == 6);
        CHECK(h.residual < ctx.sqrt_tol());
        if (h.numeric_pair.i1 == 2 && h.numeric_pair.i2 == 3 && abs(h.t - 1L) < ctx.sqrt_tol()) found = true;
    }
    // 54000 and -12288000 are 6-isogenous
    CHECK(found);
}
