#include "zp/exactpoly.hpp"

#include "zp/analytic.hpp"
#include "zp/errors.hpp"

#include <sstream>

namespace zp {

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::constant(const mpz_class& c) { return IntPoly(std::vector<mpz_class>{c}); }

IntPoly IntPoly::monomial(const mpz_class& c, int degree) {
    std::vector<mpz_class> v(static_cast<std::size_t>(degree) + 1, 0);
    v.back() = c;
    return IntPoly(std::move(v));
}

IntPoly IntPoly::linear(const mpz_class& a, const mpz_class& b) { return IntPoly({a, b}); }

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpz_class IntPoly::coeff(int k) const {
    if (k < 0 || k > degree()) return 0;
    return c_[static_cast<std::size_t>(k)];
}

const mpz_class& IntPoly::lead() const {
    if (c_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return c_.back();
}

mpz_class IntPoly::content() const {
    mpz_class g = 0;
    for (const auto& x : c_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

IntPoly IntPoly::primitive() const {
    if (is_zero()) return {};
    mpz_class g = content();
    if (lead() < 0) g = -g;
    return divide_content(*this, g);
}

IntPoly IntPoly::derivative() const {
    std::vector<mpz_class> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<unsigned long>(k));
    return IntPoly(std::move(d));
}

mpz_class IntPoly::eval(const mpz_class& x) const {
    mpz_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

mpq_class IntPoly::eval(const mpq_class& x) const {
    mpq_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * x + mpq_class(*it);
        acc.canonicalize();
    }
    return acc;
}

Complex IntPoly::eval(const Complex& x) const { return horner(to_complex(x.precision()), x); }

std::vector<Complex> IntPoly::to_complex(mpfr_prec_t bits) const {
    std::vector<Complex> v;
    v.reserve(c_.size());
    for (const auto& x : c_) v.emplace_back(Real(x, bits), Real(bits));
    return v;
}

std::string IntPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const mpz_class& a = c_[static_cast<std::size_t>(k)];
        if (a == 0) continue;
        mpz_class mag = abs(a);
        if (first) {
            if (a < 0) os << "-";
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        first = false;
        if (k == 0 || mag != 1) os << mag.get_str();
        if (k > 0) {
            if (mag != 1) os << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> r(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) r[k] += a.coeffs()[k];
    for (std::size_t k = 0; k < b.coeffs().size(); ++k) r[k] += b.coeffs()[k];
    return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a) {
    std::vector<mpz_class> r = a.coeffs();
    for (auto& x : r) x = -x;
    return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> r(a.coeffs().size() + b.coeffs().size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        if (a.coeffs()[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs().size(); ++j) r[i + j] += a.coeffs()[i] * b.coeffs()[j];
    }
    return IntPoly(std::move(r));
}

IntPoly operator*(const IntPoly& a, const mpz_class& s) {
    std::vector<mpz_class> r = a.coeffs();
    for (auto& x : r) x *= s;
    return IntPoly(std::move(r));
}

IntPoly pow(const IntPoly& a, int e) {
    if (e < 0) throw DomainError("negative polynomial power");
    IntPoly r = IntPoly::constant(1), base = a;
    while (e > 0) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

IntPoly divide_content(const IntPoly& a, const mpz_class& s) {
    if (s == 0) throw DomainError("division by zero");
    std::vector<mpz_class> r = a.coeffs();
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
    return IntPoly(std::move(r));
}

IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) throw DomainError("pseudo-remainder by zero");
    if (a.degree() < b.degree()) return a;
    std::vector<mpz_class> r = a.coeffs();
    const int db = b.degree();
    const mpz_class& lb = b.lead();
    int e = a.degree() - db + 1;
    for (int k = a.degree(); k >= db; --k) {
        mpz_class top = r[static_cast<std::size_t>(k)];
        for (auto& x : r) x *= lb;
        for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k - db + i)] -= top * b.coeffs()[static_cast<std::size_t>(i)];
        --e;
        r.pop_back();
    }
    if (e > 0) {
        mpz_class f;
        mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
        for (auto& x : r) x *= f;
    }
    return IntPoly(std::move(r));
}

namespace {

// Division over Z; returns false when some step is not exact.
bool try_divide(const IntPoly& a, const IntPoly& b, IntPoly& quotient) {
    if (b.is_zero()) throw DomainError("division by the zero polynomial");
    if (a.is_zero()) {
        quotient = {};
        return true;
    }
    if (a.degree() < b.degree()) return false;
    std::vector<mpz_class> r = a.coeffs();
    std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1, 0);
    const int db = b.degree();
    for (int k = a.degree(); k >= db; --k) {
        mpz_class& top = r[static_cast<std::size_t>(k)];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), b.lead().get_mpz_t())) return false;
        mpz_class t;
        mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), b.lead().get_mpz_t());
        q[static_cast<std::size_t>(k - db)] = t;
        for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k - db + i)] -= t * b.coeffs()[static_cast<std::size_t>(i)];
    }
    for (const auto& x : r) {
        if (x != 0) return false;
    }
    quotient = IntPoly(std::move(q));
    return true;
}

}  // namespace

IntPoly exact_divide(const IntPoly& a, const IntPoly& b) {
    IntPoly q;
    if (!try_divide(a, b, q)) throw DomainError("polynomial division is not exact");
    return q;
}

bool divides(const IntPoly& b, const IntPoly& a) {
    IntPoly q;
    return try_divide(a, b, q);
}

IntPoly gcd(const IntPoly& p, const IntPoly& q) {
    IntPoly a = p, b = q;
    if (a.degree() < b.degree()) std::swap(a, b);
    if (a.is_zero()) throw DomainError("gcd of two zero polynomials");
    if (b.is_zero()) return a.primitive();
    a = a.primitive();
    b = b.primitive();
    mpz_class g = 1, h = 1;
    while (true) {
        int delta = a.degree() - b.degree();
        IntPoly r = pseudo_remainder(a, b);
        if (r.is_zero()) break;
        if (r.degree() == 0) return IntPoly::constant(1);
        a = b;
        mpz_class hd;
        mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta));
        b = divide_content(r, g * hd);
        g = a.lead();
        // h <- h^(1 - delta) g^delta
        mpz_class gd;
        mpz_pow_ui(gd.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
        if (delta > 0) {
            mpz_class hden;
            mpz_pow_ui(hden.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta - 1));
            mpz_divexact(h.get_mpz_t(), gd.get_mpz_t(), hden.get_mpz_t());
        }
    }
    return b.primitive();
}

mpz_class resultant(const IntPoly& p, const IntPoly& q) {
    if (p.is_zero() || q.is_zero()) return 0;
    IntPoly a = p, b = q;
    mpz_class s = 1;
    if (a.degree() < b.degree()) {
        std::swap(a, b);
        if ((a.degree() & 1) && (b.degree() & 1)) s = -1;
    }
    if (b.degree() == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), b.lead().get_mpz_t(), static_cast<unsigned long>(a.degree()));
        return s * r;
    }
    mpz_class ca = a.content(), cb = b.content();
    a = divide_content(a, ca);
    b = divide_content(b, cb);
    mpz_class t, t1;
    mpz_pow_ui(t.get_mpz_t(), ca.get_mpz_t(), static_cast<unsigned long>(b.degree()));
    mpz_pow_ui(t1.get_mpz_t(), cb.get_mpz_t(), static_cast<unsigned long>(a.degree()));
    t *= t1;
    mpz_class g = 1, h = 1;
    while (true) {
        int delta = a.degree() - b.degree();
        if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
        IntPoly r = pseudo_remainder(a, b);
        if (r.is_zero()) return 0;
        a = b;
        mpz_class hd;
        mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta));
        b = divide_content(r, g * hd);
        g = a.lead();
        mpz_class gd;
        mpz_pow_ui(gd.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
        if (delta > 0) {
            mpz_class hden;
            mpz_pow_ui(hden.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta - 1));
            mpz_divexact(h.get_mpz_t(), gd.get_mpz_t(), hden.get_mpz_t());
        }
        if (b.degree() <= 0) break;
    }
    // h <- lead(b)^deg(a) h^(1 - deg(a))
    int da = a.degree();
    mpz_class num;
    mpz_pow_ui(num.get_mpz_t(), b.lead().get_mpz_t(), static_cast<unsigned long>(da));
    if (da > 1) {
        mpz_class den;
        mpz_pow_ui(den.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(da - 1));
        mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    } else if (da == 0) {
        num = h;
    }
    return s * t * num;
}

IntPoly squarefree(const IntPoly& p) {
    if (p.is_zero()) throw DomainError("squarefree part of the zero polynomial");
    if (p.degree() <= 0) return IntPoly::constant(1);
    IntPoly g = gcd(p, p.derivative());
    return exact_divide(p.primitive(), g).primitive();
}

Real mahler_height(const IntPoly& p_in, const PrecisionContext& ctx) {
    if (p_in.is_zero() || p_in.degree() < 1) throw DomainError("mahler_height needs degree at least 1");
    IntPoly p = p_in.primitive();
    Real acc = log(Real(mpz_class(abs(p.lead())), ctx.bits()));
    for (const auto& r : polyroots(p.to_complex(ctx.bits()), ctx)) {
        Real m = abs(r);
        if (m > 1L) acc += log(m);
    }
    return acc / static_cast<long>(p.degree());
}

AlgebraicPointSet isolate_points(const IntPoly& p, const PrecisionContext& ctx) {
    AlgebraicPointSet out;
    out.defining = squarefree(p);
    out.degree_bound = out.defining.degree();
    if (out.defining.degree() >= 1) out.roots = polyroots(out.defining.to_complex(ctx.bits()), ctx);
    return out;
}

RatFunc::RatFunc(IntPoly n, IntPoly d) {
    if (d.is_zero()) throw DomainError("rational function with zero denominator");
    if (n.is_zero()) {
        num = {};
        den = IntPoly::constant(1);
        return;
    }
    IntPoly g = gcd(n, d);
    if (g.degree() > 0) {
        n = exact_divide(n, g);
        d = exact_divide(d, g);
    }
    mpz_class cn = n.content(), cd = d.content();
    mpz_class c;
    mpz_gcd(c.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (d.lead() < 0) c = -c;
    num = divide_content(n, c);
    den = divide_content(d, c);
}

RatFunc RatFunc::from_rational_coeffs(const std::vector<mpq_class>& num, const std::vector<mpq_class>& den) {
    mpz_class l = 1;
    for (const auto* v : {&num, &den}) {
        for (const auto& x : *v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    }
    auto scale = [&](const std::vector<mpq_class>& v) {
        std::vector<mpz_class> r;
        for (const auto& x : v) {
            mpq_class y = x * mpq_class(l);
            y.canonicalize();
            r.push_back(y.get_num());
        }
        return IntPoly(std::move(r));
    };
    return RatFunc(scale(num), scale(den));
}

Complex RatFunc::eval(const Complex& t) const {
    Complex d = den.eval(t);
    if (d.is_zero()) throw DomainError("rational function evaluated at a pole");
    return num.eval(t) / d;
}

std::string RatFunc::to_string(const std::string& var) const {
    if (den.degree() == 0 && den.lead() == 1) return num.to_string(var);
    return "(" + num.to_string(var) + ")/(" + den.to_string(var) + ")";
}

std::vector<mpq_class> interpolate(const std::vector<mpq_class>& x, const std::vector<mpq_class>& y) {
    if (x.size() != y.size() || x.empty()) throw DomainError("interpolate: need matching nonempty node lists");
    const std::size_t n = x.size();
    std::vector<mpq_class> dd = y;
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) {
            mpq_class den = x[i] - x[i - level];
            if (den == 0) throw DomainError("interpolate: repeated node");
            dd[i] = (dd[i] - dd[i - 1]) / den;
            dd[i].canonicalize();
        }
    }
    std::vector<mpq_class> poly(n, 0);
    // Horner on the Newton form
    for (std::size_t k = n; k-- > 0;) {
        // poly <- poly * (t - x_k) + dd_k
        std::vector<mpq_class> next(n, 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * x[k];
        }
        next[0] += dd[k];
        for (auto& v : next) v.canonicalize();
        poly = std::move(next);
    }
    return poly;
}

IntPoly image_polynomial(const IntPoly& d, const RatFunc& f) {
    if (d.degree() < 1) throw DomainError("image_polynomial needs a nonconstant polynomial");
    const int n = d.degree();
    const int m = f.degree();
    std::vector<mpq_class> xs, ys;
    // nodes where y den - num keeps its full degree m, so every resultant is
    // lead(d)^m prod (y den(t_i) - num(t_i)) with one fixed normalization
    for (long k = 0; static_cast<int>(xs.size()) <= n; ++k) {
        mpz_class y = k;
        IntPoly lin = f.den * y - f.num;
        if (lin.degree() != m) continue;
        xs.emplace_back(y);
        ys.emplace_back(resultant(d, lin));
    }
    std::vector<mpq_class> coeffs = interpolate(xs, ys);
    std::vector<mpz_class> ints;
    for (const auto& c : coeffs) {
        if (c.get_den() != 1) throw StructureViolation("image_polynomial: non-integral interpolant");
        ints.push_back(c.get_num());
    }
    IntPoly r(std::move(ints));
    if (r.is_zero()) throw DegenerateInput("image_polynomial: f is constant on the roots of d");
    return r.primitive();
}

}  // namespace zp
