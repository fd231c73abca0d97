#include "zp/polyrel.hpp"

#include "zp/errors.hpp"

#include <random>
#include <sstream>

namespace zp {

std::string Var::name() const {
    return "X_{" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "}";
}

void assign_matrix(Assignment& values, int k, const Mat2& m) {
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) values[Var{i, j, k}.id()] = m(i - 1, j - 1);
}

template <class C>
Complex MultiPoly<C>::evaluate(const Assignment& values, mpfr_prec_t bits) const {
    std::map<int, std::vector<Complex>> powers;
    for (int v : variables()) {
        auto it = values.find(v);
        if (it == values.end()) throw MissingAssignment("no value for " + Var::from_id(v).name());
        powers[v] = {Complex(Real(1L, bits), Real(bits)), it->second};
    }
    Complex sum(bits);
    for (const auto& [m, c] : terms_) {
        Complex t = Traits::to_complex(c, bits);
        for (std::size_t i = 0; i < m.size();) {
            std::size_t j = i;
            while (j < m.size() && m[j] == m[i]) ++j;
            auto& pw = powers[m[i]];
            std::size_t e = j - i;
            while (pw.size() <= e) pw.push_back(pw.back() * pw[1]);
            t *= pw[e];
            i = j;
        }
        sum += t;
    }
    return sum;
}

template <class C>
C MultiPoly<C>::evaluate_exact(const std::map<int, mpq_class>& point) const {
    if constexpr (std::is_same_v<C, mpq_class>) {
        mpq_class sum = 0;
        for (const auto& [m, c] : terms_) {
            mpq_class t = c;
            for (int v : m) {
                auto it = point.find(v);
                if (it == point.end()) throw MissingAssignment("no value for " + Var::from_id(v).name());
                t *= it->second;
            }
            sum += t;
        }
        return sum;
    } else {
        (void)point;
        throw UnsupportedConfiguration("exact evaluation needs rational coefficients");
    }
}

template <class C>
std::string MultiPoly<C>::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << Traits::str(c) << ")";
        for (std::size_t i = 0; i < m.size();) {
            std::size_t j = i;
            while (j < m.size() && m[j] == m[i]) ++j;
            os << "*" << Var::from_id(m[i]).name();
            if (j - i > 1) os << "^" << (j - i);
            i = j;
        }
    }
    return os.str();
}

template class MultiPoly<Complex>;
template class MultiPoly<mpq_class>;

MultiPoly<mpq_class> IdealI0::generator(int k) const {
    using P = MultiPoly<mpq_class>;
    mpq_class one(1);
    P x11 = P::variable({1, 1, k}, one), x12 = P::variable({1, 2, k}, one);
    P x21 = P::variable({2, 1, k}, one), x22 = P::variable({2, 2, k}, one);
    return x11 * x22 - x12 * x21 - P::constant(one);
}

namespace {

struct PointSampler {
    std::mt19937_64 rng;

    mpq_class rational(bool nonzero) {
        for (;;) {
            long num = static_cast<long>(rng() % 13) - 6;
            long den = static_cast<long>(rng() % 4) + 1;
            if (nonzero && num == 0) continue;
            mpq_class q(num, den);
            q.canonicalize();
            return q;
        }
    }

    std::map<int, mpq_class> sample(const std::set<int>& vars, const IdealI0& I0) {
        std::set<int> coords;
        for (int v : vars) coords.insert(Var::from_id(v).k);
        std::map<int, mpq_class> pt;
        for (int k : coords) {
            mpq_class x11 = rational(true), x12 = rational(false), x21 = rational(false);
            mpq_class x22 = I0.smooth_coords.count(k) ? mpq_class((1 + x12 * x21) / x11) : rational(false);
            pt[Var{1, 1, k}.id()] = x11;
            pt[Var{1, 2, k}.id()] = x12;
            pt[Var{2, 1, k}.id()] = x21;
            pt[Var{2, 2, k}.id()] = x22;
        }
        return pt;
    }
};

Assignment to_assignment(const std::map<int, mpq_class>& pt, mpfr_prec_t bits) {
    Assignment a;
    for (const auto& [v, q] : pt) a[v] = Complex(Real(q, bits));
    return a;
}

}  // namespace

NonMembershipCertificate not_in_I0(const MultiPoly<Complex>& R, const IdealI0& I0, int attempts,
                                   std::uint64_t seed, const PrecisionContext& ctx) {
    if (R.is_zero()) throw DegenerateInput("not_in_I0: zero polynomial");
    PointSampler S{std::mt19937_64(seed)};
    NonMembershipCertificate cert;
    cert.threshold = ctx.sqrt_tol() * R.coeff_norm(ctx.bits());
    auto vars = R.variables();
    for (int t = 1; t <= attempts; ++t) {
        auto pt = S.sample(vars, I0);
        Complex v = R.evaluate(to_assignment(pt, ctx.bits()), ctx.bits());
        cert.attempts_used = t;
        if (abs(v) > cert.threshold) {
            cert.status = NonMembershipCertificate::Status::Certified;
            cert.point = pt;
            cert.value = v;
            return cert;
        }
    }
    return cert;
}

NonMembershipCertificate not_in_I0(const MultiPoly<mpq_class>& R, const IdealI0& I0, int attempts,
                                   std::uint64_t seed, const PrecisionContext& ctx) {
    if (R.is_zero()) throw DegenerateInput("not_in_I0: zero polynomial");
    PointSampler S{std::mt19937_64(seed)};
    NonMembershipCertificate cert;
    cert.threshold = ctx.zero();
    auto vars = R.variables();
    for (int t = 1; t <= attempts; ++t) {
        auto pt = S.sample(vars, I0);
        mpq_class v = R.evaluate_exact(pt);
        cert.attempts_used = t;
        if (v != 0) {
            cert.status = NonMembershipCertificate::Status::Certified;
            cert.point = pt;
            cert.value = Complex(Real(v, ctx.bits()));
            return cert;
        }
    }
    return cert;
}

namespace {

template <class C>
using PiMat = std::array<std::array<C, 2>, 2>;

/// Entry (i, j) of Pi X_{.,.,k} as a linear form.
template <class C>
MultiPoly<C> entry(const PiMat<C>& pi, int k, int i, int j, const C& one) {
    MultiPoly<C> p;
    for (int l = 0; l < 2; ++l) p.add_term({Var{l + 1, j + 1, k}.id()}, pi[i][l] * one);
    return p;
}

template <class C>
MultiPoly<C> det_form(const PiMat<C>& pi, int k, const C& one) {
    return entry(pi, k, 0, 0, one) * entry(pi, k, 1, 1, one) - entry(pi, k, 0, 1, one) * entry(pi, k, 1, 0, one);
}

template <class C>
PiMat<C> pi_entries(const Mat2& m) {
    return {{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}};
}

PairCoefficients<Complex> coefficients(const FirstWayTerms& t) {
    return {t.a, t.b, t.c, pi_entries<Complex>(t.pi_sing), pi_entries<Complex>(t.pi_cm), t.k_sing, t.k_cm};
}

PairCoefficients<Complex> coefficients(const SecondWayTerms& t) {
    return {t.a, t.b, t.c, pi_entries<Complex>(t.pi_tgt), pi_entries<Complex>(t.pi_src), t.k_tgt, t.k_src};
}

Complex lift(long v, const PrecisionContext& ctx) { return ctx.complex(ctx.real(v)); }

}  // namespace

template <class C>
MultiPoly<C> build_R_degenerate(const PairCoefficients<C>& pc, int which, const C& one) {
    if (CoeffTraits<C>::is_zero(pc.a) || CoeffTraits<C>::is_zero(pc.c))
        throw DegenerateInput("build_R_degenerate: de Rham matrix must have a, c != 0");
    if (which < 0 || which > 3) throw DomainError("build_R_degenerate: H index out of range");
    auto G = [&](int i, int j) { return entry(pc.pi_g, pc.k_g, i, j, one); };
    auto h = [&](int i, int j) { return entry(pc.pi_h, pc.k_h, i, j, one); };
    MultiPoly<C> g1, g2;
    if (which < 2) {
        g1 = pc.b * G(0, 0) - pc.a * G(1, 0);
        g2 = pc.c * G(0, 0);
    } else {
        g1 = pc.a * G(1, 1) - pc.b * G(0, 1);
        g2 = C(-pc.c) * G(0, 1);
    }
    int col = which % 2;
    return g1 * h(0, col) + g2 * h(1, col);
}

template MultiPoly<Complex> build_R_degenerate(const PairCoefficients<Complex>&, int, const Complex&);
template MultiPoly<mpq_class> build_R_degenerate(const PairCoefficients<mpq_class>&, int, const mpq_class&);

MultiPoly<Complex> build_R_degenerate(const FirstWayTerms& t, int which, const PrecisionContext& ctx) {
    if (which < 0 || which > 1) throw DomainError("first way has H1, H2 only");
    return build_R_degenerate(coefficients(t), which, ctx.cone());
}

MultiPoly<Complex> build_R_degenerate(const SecondWayTerms& t, int which, const PrecisionContext& ctx) {
    return build_R_degenerate(coefficients(t), which, ctx.cone());
}

MultiPoly<Complex> build_R_product(const RelationWitness& w, const PrecisionContext& ctx) {
    using P = MultiPoly<Complex>;
    const Complex one = ctx.cone();
    if (w.second) {
        const auto& t = *w.second;
        auto pc = coefficients(t);
        P prod = build_R_degenerate(pc, 0, one) * build_R_degenerate(pc, 1, one) * build_R_degenerate(pc, 2, one) *
                 build_R_degenerate(pc, 3, one);
        P d3 = det_form(pc.pi_g, pc.k_g, one), d2 = det_form(pc.pi_h, pc.k_h, one);
        return prod - lift(t.p * t.q * t.r * t.s, ctx) * (d3 * d3 * d2 * d2);
    }
    if (w.first.size() == 1) {
        const auto& t = w.first[0];
        auto pc = coefficients(t);
        P prod = build_R_degenerate(pc, 0, one) * build_R_degenerate(pc, 1, one);
        P d = det_form(pc.pi_h, pc.k_h, one);
        return prod - (lift(t.r * t.s, ctx) / ctx.two_pi_i()) * (d * d);
    }
    if (w.first.size() == 2) {
        auto p1 = coefficients(w.first[0]);
        auto p2 = coefficients(w.first[1]);
        P h1 = build_R_degenerate(p1, 0, one) * build_R_degenerate(p1, 1, one);
        P h2 = build_R_degenerate(p2, 0, one) * build_R_degenerate(p2, 1, one);
        return lift(w.first[1].r * w.first[1].s, ctx) * h1 - lift(w.first[0].r * w.first[0].s, ctx) * h2;
    }
    throw DomainError("build_R_product: witness carries no relation data");
}

MultiPoly<Complex> build_R(const RelationWitness& w, const PrecisionContext& ctx) {
    if (!w.vanishing) return build_R_product(w, ctx);
    if (w.second) return build_R_degenerate(*w.second, *w.vanishing, ctx);
    if (w.first.size() == 1) return build_R_degenerate(w.first[0], *w.vanishing, ctx);
    throw DomainError("build_R: degenerate witness without a single pair");
}

IdealI0 ideal_for(const RelationWitness& w) {
    IdealI0 I;
    for (const auto& t : w.first) I.smooth_coords.insert(t.k_cm);
    if (w.second) {
        I.smooth_coords.insert(w.second->k_src);
        I.smooth_coords.insert(w.second->k_tgt);
    }
    return I;
}

Real relative_value(const MultiPoly<Complex>& R, const Assignment& values, mpfr_prec_t bits) {
    Real v = abs(R.evaluate(values, bits));
    if (R.is_zero()) return v;
    Real m(1L, bits);
    for (int k : R.variables()) m = max(m, abs(values.at(k)));
    return v / (R.coeff_norm(bits) * pow(m, R.degree()));
}

Assignment instance_values(const RelationInstance& inst) {
    Assignment a;
    for (const auto& c : inst.coords) assign_matrix(a, c.index, c.values());
    return a;
}

}  // namespace zp
