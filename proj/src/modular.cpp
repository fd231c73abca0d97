#include "zp/modular.hpp"

#include "zp/errors.hpp"
#include "zp/isogeny.hpp"
#include "zp/periods.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace zp {

bool ModularPolynomial::is_symmetric() const {
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[i][k] != coeffs[k][i]) return false;
        }
    }
    return true;
}

mpz_class ModularPolynomial::eval(const mpz_class& x, const mpz_class& y) const {
    mpz_class acc = 0;
    for (auto row = coeffs.rbegin(); row != coeffs.rend(); ++row) {
        mpz_class inner = 0;
        for (auto c = row->rbegin(); c != row->rend(); ++c) inner = inner * y + *c;
        acc = acc * x + inner;
    }
    return acc;
}

mpq_class ModularPolynomial::eval(const mpq_class& x, const mpq_class& y) const {
    mpq_class acc = 0;
    for (auto row = coeffs.rbegin(); row != coeffs.rend(); ++row) {
        mpq_class inner = 0;
        for (auto c = row->rbegin(); c != row->rend(); ++c) inner = inner * y + mpq_class(*c);
        acc = acc * x + inner;
    }
    acc.canonicalize();
    return acc;
}

std::vector<Complex> ModularPolynomial::specialize_y(const Complex& y) const {
    std::vector<Complex> out;
    for (const auto& row : coeffs) {
        Complex inner(y.precision());
        for (auto c = row.rbegin(); c != row.rend(); ++c) {
            inner *= y;
            inner.re += Real(*c, y.precision());
        }
        out.push_back(inner);
    }
    return out;
}

Complex ModularPolynomial::eval(const Complex& x, const Complex& y) const { return horner(specialize_y(y), x); }

ModularPolynomial ModularPolynomial::supplied(long N, std::vector<std::vector<mpz_class>> coeffs) {
    if (N < 1) throw ParseError("modular polynomial level must be positive");
    std::size_t n = static_cast<std::size_t>(psi(N)) + 1;
    if (coeffs.size() != n) throw ParseError("modular polynomial table must have psi(N)+1 rows");
    for (const auto& row : coeffs) {
        if (row.size() != n) throw ParseError("modular polynomial table must be square");
    }
    ModularPolynomial m;
    m.N = N;
    m.coeffs = std::move(coeffs);
    m.provenance = Provenance::Supplied;
    return m;
}

std::vector<Complex> isogenous_j_values(long N, const Complex& tau, const PrecisionContext& ctx) {
    if (!tau.is_finite() || tau.im.sign() <= 0) throw DomainError("phi_eval_numeric: tau must lie in the upper half plane");
    std::vector<Complex> out;
    for (const auto& s : cyclic_sublattices(N)) {
        Complex t = tau.with_precision(ctx.bits()) * s.a;
        t.re += ctx.real(s.b);
        out.push_back(j_invariant(t / s.d, ctx));
    }
    return out;
}

Complex phi_eval_numeric(long N, const Complex& x, const Complex& tau, const PrecisionContext& ctx) {
    Complex acc = ctx.cone();
    for (const auto& j : isogenous_j_values(N, tau, ctx)) acc *= x - j;
    return acc;
}

namespace {

// Monic X-coefficients of prod (X - j_k), constant term first.
std::vector<Complex> expand_roots(const std::vector<Complex>& roots, const PrecisionContext& ctx) {
    std::vector<Complex> c = {ctx.cone()};
    for (const auto& r : roots) {
        std::vector<Complex> next(c.size() + 1, ctx.czero());
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= c[k] * r;
        }
        c = std::move(next);
    }
    return c;
}

// Table at one precision, or nullopt if some coefficient is not near an integer.
std::optional<std::vector<std::vector<mpz_class>>> recover_at(long N, int bits) {
    PrecisionContext ctx(bits);
    const long n = psi(N);
    std::vector<std::vector<mpz_class>> rows;  // rows[m][i] = coefficient of X^i in Phi(X, m)
    for (long m = 0; m <= n; ++m) {
        Complex tau = inverse_j(ctx.complex(ctx.real(m)), ctx);
        auto c = expand_roots(isogenous_j_values(N, tau, ctx), ctx);
        std::vector<mpz_class> ints;
        for (const auto& v : c) {
            mpz_class r = v.re.round_to_integer();
            Real err = abs(v - Complex(Real(r, bits)));
            if (err > ctx.real(0.25)) return std::nullopt;
            ints.push_back(r);
        }
        rows.push_back(std::move(ints));
    }
    std::vector<std::vector<mpz_class>> table(static_cast<std::size_t>(n) + 1,
                                              std::vector<mpz_class>(static_cast<std::size_t>(n) + 1, 0));
    std::vector<mpq_class> xs;
    for (long m = 0; m <= n; ++m) xs.emplace_back(m);
    for (long i = 0; i <= n; ++i) {
        std::vector<mpq_class> ys;
        for (long m = 0; m <= n; ++m) ys.emplace_back(rows[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)]);
        auto poly = interpolate(xs, ys);
        for (long k = 0; k <= n; ++k) {
            const mpq_class& q = poly[static_cast<std::size_t>(k)];
            if (q.get_den() != 1) return std::nullopt;
            table[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = q.get_num();
        }
    }
    return table;
}

}  // namespace

ModularPolynomial phi_recover_exact(long N, const PrecisionContext& ctx, int max_bits) {
    if (N < 1) throw DomainError("phi_recover_exact: level must be positive");
    int bits = ctx.bits();
    std::optional<std::vector<std::vector<mpz_class>>> previous;
    while (bits <= max_bits) {
        auto table = recover_at(N, bits);
        if (table && previous && *table == *previous) {
            ModularPolynomial m;
            m.N = N;
            m.coeffs = std::move(*table);
            m.provenance = ModularPolynomial::Provenance::Recovered;
            if (N > 1 && !m.is_symmetric()) throw StructureViolation("phi_recover_exact: recovered table is not symmetric");
            return m;
        }
        previous = std::move(table);
        bits *= 2;
    }
    throw NonConvergence("phi_recover_exact: coefficients not stable up to the precision cap");
}

const ModularPolynomial& modular_polynomial(long N) {
    static std::mutex mu;
    static std::map<long, std::unique_ptr<ModularPolynomial>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it == cache.end()) {
        it = cache.emplace(N, std::make_unique<ModularPolynomial>(phi_recover_exact(N, PrecisionContext(256)))).first;
    }
    return *it->second;
}

IntPoly phi_specialize(const ModularPolynomial& phi, const RatFunc& f, const RatFunc& g) {
    const int D = phi.degree();
    std::vector<IntPoly> fn(D + 1), fd(D + 1), gn(D + 1), gd(D + 1);
    fn[0] = fd[0] = gn[0] = gd[0] = IntPoly::constant(1);
    for (int k = 1; k <= D; ++k) {
        fn[k] = fn[k - 1] * f.num;
        fd[k] = fd[k - 1] * f.den;
        gn[k] = gn[k - 1] * g.num;
        gd[k] = gd[k - 1] * g.den;
    }
    IntPoly total;
    for (int i = 0; i <= D; ++i) {
        IntPoly inner;
        for (int k = 0; k <= D; ++k) {
            const mpz_class& c = phi.coeffs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (c == 0) continue;
            inner = inner + gn[k] * gd[D - k] * c;
        }
        if (!inner.is_zero()) total = total + fn[i] * fd[D - i] * inner;
    }
    if (total.is_zero()) throw DegenerateInput("phi_specialize: the curve lies in the modular correspondence");
    IntPoly poles = f.den * g.den;
    if (poles.degree() > 0) {
        for (IntPoly common = gcd(total, poles); common.degree() > 0; common = gcd(total, poles)) {
            total = exact_divide(total, common);
        }
    }
    return total.primitive();
}

}  // namespace zp
