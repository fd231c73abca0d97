#include "zp/relations.hpp"

#include "zp/errors.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace zp {

Coordinate::Coordinate(int k, Role r, StructuredPeriod sp, mpfr_prec_t bits)
    : index(k), role(r), period(std::move(sp)), pi1(Mat2::identity(bits)), pi2(Mat2::identity(bits)) {}

Mat2 Coordinate::values() const { return inverse(pi1) * period.h; }

Mat2 Coordinate::h_tilde() const { return inverse(pi1 * pi2) * period.h; }

const Coordinate& RelationInstance::coord(int k) const {
    for (const auto& c : coords)
        if (c.index == k) return c;
    throw DomainError("relation instance has no coordinate " + std::to_string(k));
}

std::string to_string(Way w) {
    switch (w) {
        case Way::FirstWay: return "first_way";
        case Way::SecondWay: return "second_way";
        case Way::FourCoordinate: return "four_coordinate";
    }
    return "unknown";
}

bool RelationWitness::holds(const PrecisionContext& ctx) const {
    Real s = max(scale, ctx.real(1L));
    if (residual > ctx.tol() * s) return false;
    if (vanishing && abs(H.at(*vanishing)) > ctx.tol() * s) return false;
    return true;
}

std::array<Complex, 2> g_vector(const Mat2& h, const Complex& a, const Complex& b, const Complex& c, bool top) {
    if (top) return {a * h(1, 1) - b * h(0, 1), -(c * h(0, 1))};
    return {b * h(0, 0) - a * h(1, 0), c * h(0, 0)};
}

namespace {

Complex lift(long v, const PrecisionContext& ctx) { return ctx.complex(ctx.real(v)); }

void require_det_one(const Mat2& h, const char* what, const PrecisionContext& ctx) {
    Real s = max(ctx.real(1L), max_norm(h));
    if (abs(h.det() - 1L) > ctx.sqrt_tol() * s * s)
        throw DomainError(std::string(what) + ": value matrix must have determinant 1");
}

Real entry_scale(std::initializer_list<const Complex*> zs, const PrecisionContext& ctx) {
    Real s = ctx.real(1L);
    for (const Complex* z : zs) s = max(s, abs(*z));
    return s;
}

}  // namespace

RelationWitness second_way(const Coordinate& src, const Coordinate& tgt, const IsogenyWitness& iso,
                           const PrecisionContext& ctx) {
    if (src.role != Role::Cm || tgt.role != Role::Cm) throw DomainError("second_way needs two CM coordinates");
    const Mat2& h2 = src.period.h;
    const Mat2& h3 = tgt.period.h;
    require_det_one(h2, "second_way source", ctx);
    require_det_one(h3, "second_way target", ctx);
    const Complex& vp = src.period.varpi;  // varpi'
    const Complex& v = tgt.period.varpi;
    const auto& A = iso.de_rham;
    const IntMat2& B = iso.homology;
    const Complex& tpi = ctx.two_pi_i();

    auto gt = g_vector(h3, A.a, A.b, A.c, true);
    auto gb = g_vector(h3, A.a, A.b, A.c, false);
    auto Htop = row_times(gt, h2);
    auto Hbot = row_times(gb, h2);

    SecondWayTerms t;
    t.k_src = src.index;
    t.k_tgt = tgt.index;
    t.a = A.a;
    t.b = A.b;
    t.c = A.c;
    t.pi_src = src.pi1;
    t.pi_tgt = tgt.pi1;
    t.p = B.a;
    t.q = B.b;
    t.r = B.c;
    t.s = B.d;
    t.H1 = Hbot[0];
    t.H2 = Hbot[1];
    t.H3 = Htop[0];
    t.H4 = Htop[1];

    Complex P = lift(t.p, ctx), Q = lift(t.q, ctx), R = lift(t.r, ctx), S = lift(t.s, ctx);
    std::array<Complex, 4> lhs{vp * t.H3 / tpi, t.H4 / vp, vp * t.H1 / tpi, t.H2 / vp};
    std::array<Complex, 4> rhs{v * P / tpi, v * Q / tpi, R / v, S / v};
    Real entry = ctx.zero();
    Real escale = ctx.real(1L);
    for (int i = 0; i < 4; ++i) {
        entry = max(entry, abs(lhs[i] - rhs[i]));
        escale = max(escale, max(abs(lhs[i]), abs(rhs[i])));
    }

    RelationWitness w;
    w.way = Way::SecondWay;
    w.H = {t.H1, t.H2, t.H3, t.H4};
    w.rhs = {t.p, t.q, t.r, t.s};
    Complex prod = t.H1 * t.H2 * t.H3 * t.H4;
    Complex target = lift(t.p * t.q * t.r * t.s, ctx);
    w.residual = abs(prod - target);
    w.scale = entry_scale({&prod, &target}, ctx);
    w.entry_residual = entry / escale;
    if (t.r == 0) w.vanishing = 0;
    else if (t.s == 0) w.vanishing = 1;
    else if (t.p == 0) w.vanishing = 2;
    else if (t.q == 0) w.vanishing = 3;
    w.second = t;

    bool entries_ok = w.entry_residual <= ctx.sqrt_tol();
    bool product_ok = w.residual <= ctx.sqrt_tol() * w.scale;
    if (!entries_ok && product_ok)
        throw StructureViolation("second_way: entry identities fail while the product identity holds (gauge mismatch)");
    return w;
}

RelationWitness first_way(const Coordinate& sing, const Coordinate& cm, const IsogenyWitness& iso,
                          const PrecisionContext& ctx) {
    if (sing.role != Role::Singular || cm.role != Role::Cm)
        throw DomainError("first_way needs a singular and a CM coordinate");
    const Mat2& hk = sing.period.h;
    const Mat2& h3 = cm.period.h;
    require_det_one(h3, "first_way CM coordinate", ctx);
    Mat2 S = sing.period.structural_factor(ctx);
    Real ss = max(ctx.real(1L), max_norm(S));
    if (abs(S.det()) < ctx.tol() * ss * ss) throw DegenerateInput("first_way: singular structure matrix is not invertible");

    const Complex& tpi = ctx.two_pi_i();
    // endpoint identities need d' = 0 and 2 pi i det(h_k) e0' = 1
    Complex lambda = tpi * hk.det() * sing.period.e0prime;
    if (abs(sing.period.dprime) > ctx.sqrt_tol() * ss || abs(lambda - 1L) > ctx.sqrt_tol())
        throw StructureViolation("first_way: singular coordinate is not in the normalized form d' = 0, 2 pi i det(h) e0' = 1");

    const Complex& v0 = cm.period.varpi;
    const auto& A = iso.de_rham;
    const IntMat2& B = iso.homology;
    auto g = g_vector(hk, A.a, A.b, A.c, false);
    auto H = row_times(g, h3);

    FirstWayTerms t;
    t.k_sing = sing.index;
    t.k_cm = cm.index;
    t.a = A.a;
    t.b = A.b;
    t.c = A.c;
    t.pi_sing = sing.pi1;
    t.pi_cm = cm.pi1;
    t.p = B.a;
    t.q = B.b;
    t.r = B.c;
    t.s = B.d;
    t.H1 = H[0];
    t.H2 = H[1];

    Complex R = lift(t.r, ctx), Sv = lift(t.s, ctx);
    Complex l1 = t.H1 * v0 / tpi, r1 = R / tpi;
    Complex l2 = t.H2 / v0, r2 = Sv / tpi;
    Real escale = entry_scale({&l1, &r1, &l2, &r2}, ctx);

    RelationWitness w;
    w.way = Way::FirstWay;
    w.H = {t.H1, t.H2};
    w.rhs = {t.r, t.s};
    Complex prod = t.H1 * t.H2;
    Complex target = lift(t.r * t.s, ctx) / tpi;
    w.residual = abs(prod - target);
    w.scale = entry_scale({&prod, &target}, ctx);
    w.entry_residual = max(abs(l1 - r1), abs(l2 - r2)) / escale;
    if (t.r == 0) w.vanishing = 0;
    else if (t.s == 0) w.vanishing = 1;
    w.first.push_back(t);

    bool entries_ok = w.entry_residual <= ctx.sqrt_tol();
    bool product_ok = w.residual <= ctx.sqrt_tol() * w.scale;
    if (!entries_ok && product_ok)
        throw StructureViolation("first_way: entry identities fail while the product identity holds (gauge mismatch)");
    return w;
}

RelationWitness four_coordinate(const RelationWitness& pair1, const RelationWitness& pair2,
                                const PrecisionContext& ctx) {
    if (pair1.way != Way::FirstWay || pair2.way != Way::FirstWay || pair1.first.size() != 1 || pair2.first.size() != 1)
        throw DomainError("four_coordinate combines two single first-way pairs");
    if (pair1.vanishing) return pair1;
    if (pair2.vanishing) return pair2;
    const auto& t1 = pair1.first[0];
    const auto& t2 = pair2.first[0];
    RelationWitness w;
    w.way = Way::FourCoordinate;
    w.H = {t1.H1, t1.H2, t2.H1, t2.H2};
    w.rhs = {t1.r, t1.s, t2.r, t2.s};
    Complex lhs = t1.H1 * t1.H2 * lift(t2.r * t2.s, ctx);
    Complex rhs = t2.H1 * t2.H2 * lift(t1.r * t1.s, ctx);
    w.residual = abs(lhs - rhs);
    w.scale = entry_scale({&lhs, &rhs}, ctx);
    w.entry_residual = max(pair1.entry_residual, pair2.entry_residual);
    w.first = {t1, t2};
    return w;
}

namespace {

bool is_singular(const RelationInstance& inst, int k) { return inst.coord(k).role == Role::Singular; }

RelationWitness run_first(const RelationInstance& inst, const IsogenyLink& l, const PrecisionContext& ctx) {
    if (!is_singular(inst, l.target) || is_singular(inst, l.source))
        throw DomainError("first-way link must run from the CM coordinate to the singular coordinate");
    return first_way(inst.coord(l.target), inst.coord(l.source), l.witness, ctx);
}

RelationWitness run_second(const RelationInstance& inst, const IsogenyLink& l, const PrecisionContext& ctx) {
    return second_way(inst.coord(l.source), inst.coord(l.target), l.witness, ctx);
}

RelationWitness combine_first(const RelationInstance& inst, const IsogenyLink& l1, const IsogenyLink& l2,
                              const PrecisionContext& ctx) {
    return four_coordinate(run_first(inst, l1, ctx), run_first(inst, l2, ctx), ctx);
}

}  // namespace

RelationWitness dispatch_case(const RelationInstance& inst, const PrecisionContext& ctx) {
    if (inst.links.size() != 2) throw DomainError("dispatch_case expects exactly two isogenies");
    std::set<int> seen;
    for (const auto& c : inst.coords)
        if (!seen.insert(c.index).second) throw DomainError("duplicate coordinate index");
    std::set<int> involved;
    for (const auto& l : inst.links) {
        if (l.source == l.target) throw DomainError("an isogeny must connect two distinct coordinates");
        involved.insert(l.source);
        involved.insert(l.target);
    }
    int singular = 0;
    for (int k : involved) singular += is_singular(inst, k) ? 1 : 0;
    int n = static_cast<int>(involved.size());
    if (n < 3) throw DomainError("the two isogenies must involve at least three coordinates");
    if (singular == n) throw UnsupportedConfiguration("all isogenous coordinates are singular");

    auto kind = [&](const IsogenyLink& l) {
        int s = (is_singular(inst, l.source) ? 1 : 0) + (is_singular(inst, l.target) ? 1 : 0);
        return s;  // 0: CM-CM, 1: mixed, 2: singular-singular
    };
    const IsogenyLink* cmcm = nullptr;
    std::vector<const IsogenyLink*> mixed;
    for (const auto& l : inst.links) {
        if (kind(l) == 0 && !cmcm) cmcm = &l;
        if (kind(l) == 1) mixed.push_back(&l);
    }

    auto first_branch = [&]() {
        if (mixed.size() == 2) return combine_first(inst, *mixed[0], *mixed[1], ctx);
        if (mixed.size() == 1) return run_first(inst, *mixed[0], ctx);
        throw UnsupportedConfiguration("no isogeny between a singular and a CM coordinate");
    };

    RelationWitness w;
    int case_id = 0;
    if (n == 3) {
        if (singular == 2) {
            case_id = 1;
            w = first_branch();
        } else if (singular == 1) {
            case_id = 2;
            w = cmcm ? run_second(inst, *cmcm, ctx) : first_branch();
        } else {
            case_id = 6;
            w = run_second(inst, *cmcm, ctx);
        }
    } else {
        if (singular == 3) {
            case_id = 3;
            w = first_branch();
        } else if (singular == 2) {
            case_id = 4;
            w = cmcm ? run_second(inst, *cmcm, ctx) : first_branch();
        } else if (singular == 1) {
            case_id = 5;
            w = run_second(inst, *cmcm, ctx);
        } else {
            case_id = 6;
            w = run_second(inst, *cmcm, ctx);
        }
    }
    w.case_id = case_id;
    return w;
}

namespace {

struct Sampler {
    std::mt19937_64 rng;
    const PrecisionContext& ctx;

    double unit() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    long integer(long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }
    long nonzero(long bound) {
        long v = integer(1, bound);
        return (rng() & 1) ? v : -v;
    }
    Complex complex(double r) {
        // modulus in [0.5, r], so the value is safely away from zero
        double m = uniform(0.5, r), t = uniform(0.0, 6.283185307179586);
        Real rr(m, ctx.bits());
        Real tt(t, ctx.bits());
        return {rr * cos(tt), rr * sin(tt)};
    }
    Mat2 det_one() {
        Complex x11 = complex(2.0), x12 = complex(2.0), x21 = complex(2.0);
        Complex x22 = (x12 * x21 + 1L) / x11;
        return {x11, x12, x21, x22};
    }
    IntMat2 sl2() {
        IntMat2 u{1, integer(-2, 2), 0, 1};
        IntMat2 l{1, 0, integer(-2, 2), 1};
        return (rng() & 1) ? u * l : l * u;
    }
    IntMat2 homology(long M, bool zero_r, bool zero_s) {
        if (zero_r) {
            long p = (rng() & 1) ? M : 1;
            return {p, nonzero(3), 0, M / p};
        }
        if (zero_s) return {nonzero(3), M, -1, 0};
        for (;;) {
            IntMat2 B = sl2() * IntMat2{M, 0, 0, 1} * sl2();
            if (B.a != 0 && B.b != 0 && B.c != 0 && B.d != 0) return B;
        }
    }
    Mat2 pi() { return Mat2::from_int(sl2(), ctx.bits()); }
};

Coordinate cm_coordinate(int k, const Mat2& h, const Complex& varpi, const PrecisionContext& ctx) {
    StructuredPeriod sp;
    sp.kind = StructuredPeriod::Kind::Cm;
    sp.h = h;
    sp.varpi = varpi;
    return Coordinate(k, Role::Cm, std::move(sp), ctx.bits());
}

IsogenyWitness make_witness(long M, const Complex& a, const Complex& b, const Complex& c, const IntMat2& B,
                            const Mat2& P1, const Mat2& P2, const PrecisionContext& ctx) {
    IsogenyWitness w;
    w.M = M;
    w.de_rham = {a, b, c, ctx.zero()};
    w.homology = B;
    Mat2 A{a, ctx.czero(), b, c};
    w.residual = max_norm(A * P1 - P2 * Mat2::from_int(B, ctx.bits()));
    return w;
}

struct FirstPair {
    Coordinate sing, cm;
    IsogenyLink link;
};

FirstPair make_first_pair(Sampler& S, int k_sing, int k_cm, const SyntheticOptions& opt, const PrecisionContext& ctx,
                          const Coordinate* shared = nullptr) {
    long M = opt.degree;
    if (M < 1) throw DomainError("isogeny degree must be positive");
    Mat2 h3 = shared ? shared->period.h : S.det_one();
    Complex v0 = shared ? shared->period.varpi : S.complex(3.0);
    IntMat2 B = S.homology(M, opt.zero_r, opt.zero_s);
    Complex a = S.complex(2.0);
    Complex b = S.complex(2.0);
    Complex c = lift(M, ctx) / a;
    Complex e = S.complex(2.0), ep = S.complex(2.0), logx = S.complex(2.0);
    mpq_class N(S.integer(-5, 5), S.integer(1, 4));
    N.canonicalize();
    Mat2 Sm = make_singular_structure(ctx.cone(), ctx.czero(), e, ep, N, logx, ctx);

    StructuredPeriod cp;
    cp.kind = StructuredPeriod::Kind::Cm;
    cp.h = h3;
    cp.varpi = v0;
    Mat2 W0 = cp.structural_factor(ctx);
    Mat2 A{a, ctx.czero(), b, c};
    Mat2 Bm = Mat2::from_int(B, ctx.bits());
    Mat2 hk = A * h3 * W0 * inverse(Bm) * inverse(Sm);

    StructuredPeriod sp;
    sp.kind = StructuredPeriod::Kind::Singular;
    sp.h = hk;
    sp.d = Sm(0, 0);
    sp.e0 = Sm(0, 1);
    sp.dprime = Sm(1, 0);
    sp.e0prime = Sm(1, 1);

    FirstPair fp{Coordinate(k_sing, Role::Singular, sp, ctx.bits()),
                 shared ? *shared : Coordinate(k_cm, Role::Cm, cp, ctx.bits()), {}};
    if (opt.random_pi) {
        fp.sing.pi1 = S.pi();
        fp.sing.pi2 = S.pi();
        if (!shared) fp.cm.pi1 = S.pi();
    }
    fp.link = {k_cm, k_sing, make_witness(M, a, b, c, B, h3 * W0, hk * Sm, ctx)};
    return fp;
}

}  // namespace

RelationInstance synthetic_first_way(std::uint64_t seed, const SyntheticOptions& opt, const PrecisionContext& ctx) {
    Sampler S{std::mt19937_64(seed), ctx};
    FirstPair fp = make_first_pair(S, 1, 3, opt, ctx);
    RelationInstance inst;
    inst.coords = {fp.sing, fp.cm};
    inst.links = {fp.link};
    return inst;
}

RelationInstance synthetic_four_coordinate(std::uint64_t seed, const SyntheticOptions& opt1,
                                           const SyntheticOptions& opt2, const PrecisionContext& ctx) {
    Sampler S{std::mt19937_64(seed), ctx};
    FirstPair p1 = make_first_pair(S, 1, 2, opt1, ctx);
    FirstPair p2 = make_first_pair(S, 3, 4, opt2, ctx);
    RelationInstance inst;
    inst.coords = {p1.sing, p1.cm, p2.sing, p2.cm};
    inst.links = {p1.link, p2.link};
    return inst;
}

RelationInstance synthetic_shared_cm(std::uint64_t seed, const SyntheticOptions& opt1, const SyntheticOptions& opt2,
                                     const PrecisionContext& ctx) {
    Sampler S{std::mt19937_64(seed), ctx};
    FirstPair p1 = make_first_pair(S, 1, 3, opt1, ctx);
    FirstPair p2 = make_first_pair(S, 2, 3, opt2, ctx, &p1.cm);
    RelationInstance inst;
    inst.coords = {p1.sing, p2.sing, p1.cm};
    inst.links = {p1.link, p2.link};
    return inst;
}

RelationInstance attach_first_way(const RelationInstance& base, int k_cm, int k_sing, std::uint64_t seed,
                                  const SyntheticOptions& opt, const PrecisionContext& ctx) {
    Sampler S{std::mt19937_64(seed), ctx};
    FirstPair p = make_first_pair(S, k_sing, k_cm, opt, ctx, &base.coord(k_cm));
    RelationInstance inst = base;
    inst.coords.push_back(p.sing);
    inst.links.push_back(p.link);
    return inst;
}

RelationInstance synthetic_second_way(std::uint64_t seed, const SyntheticOptions& opt, const PrecisionContext& ctx) {
    Sampler S{std::mt19937_64(seed), ctx};
    long M = opt.degree;
    if (M < 1) throw DomainError("isogeny degree must be positive");
    Mat2 h3 = S.det_one();
    Complex v = S.complex(3.0), vp = S.complex(3.0);
    IntMat2 B = S.homology(M, opt.zero_r, opt.zero_s);
    Complex a = S.complex(2.0);
    Complex b = S.complex(2.0);
    Complex c = lift(M, ctx) / a;
    Coordinate tgt = cm_coordinate(3, h3, v, ctx);
    Coordinate src = cm_coordinate(2, Mat2::identity(ctx.bits()), vp, ctx);
    Mat2 D = tgt.period.structural_factor(ctx);
    Mat2 Dp = src.period.structural_factor(ctx);
    Mat2 A{a, ctx.czero(), b, c};
    Mat2 Bm = Mat2::from_int(B, ctx.bits());
    src.period.h = inverse(A) * h3 * D * Bm * inverse(Dp);
    if (opt.random_pi) {
        src.pi1 = S.pi();
        tgt.pi1 = S.pi();
    }
    RelationInstance inst;
    inst.coords = {src, tgt};
    inst.links = {{2, 3, make_witness(M, a, b, c, B, src.period.h * Dp, h3 * D, ctx)}};
    return inst;
}

RelationInstance genuine_second_way(const Complex& tau, const CyclicSublattice& sub, const PrecisionContext& ctx) {
    Lattice lat = Lattice::from_tau(tau, ctx);
    IsogenyRecord rec = build_isogeny(lat, sub, ctx);
    if (!rec.check.passed(ctx)) throw StructureViolation("isogeny witness failed verification");
    RelationInstance inst;
    inst.coords = {Coordinate(2, Role::Cm, decompose_cm(rec.P1, ctx), ctx.bits()),
                   Coordinate(3, Role::Cm, decompose_cm(rec.P2, ctx), ctx.bits())};
    inst.links = {{2, 3, rec.witness}};
    return inst;
}

RelationWitness evaluate_instance(const RelationInstance& inst, const PrecisionContext& ctx) {
    if (inst.links.size() == 2) return dispatch_case(inst, ctx);
    if (inst.links.size() != 1) throw DomainError("an instance needs one or two isogenies");
    const auto& l = inst.links[0];
    const auto& src = inst.coord(l.source);
    const auto& tgt = inst.coord(l.target);
    if (src.role == Role::Cm && tgt.role == Role::Cm) return second_way(src, tgt, l.witness, ctx);
    if (src.role == Role::Cm && tgt.role == Role::Singular) return first_way(tgt, src, l.witness, ctx);
    if (src.role == Role::Singular && tgt.role == Role::Singular)
        throw UnsupportedConfiguration("both isogenous coordinates are singular");
    throw DomainError("a first-way isogeny must run from the CM coordinate to the singular one");
}

}  // namespace zp
