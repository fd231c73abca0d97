#include "zp/scanner.hpp"

#include "zp/errors.hpp"
#include "zp/periods.hpp"

#include <atomic>
#include <mutex>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

namespace zp {

void CurveModel::validate() const {
    if (n < 1 || static_cast<int>(maps.size()) != n) throw DomainError("curve: n does not match the number of maps");
    if (!roles.empty() && static_cast<int>(roles.size()) != n) throw DomainError("curve: role list has the wrong length");
    int nonconstant = 0;
    for (const auto& f : maps) nonconstant += f.degree() > 0 ? 1 : 0;
    if (nonconstant < 2) throw DomainError("curve: at least two coordinates must be nonconstant");
    if (allow_equal) return;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (maps[i].num == maps[k].num && maps[i].den == maps[k].den && maps[i].degree() > 0)
                throw DomainError("curve: j" + std::to_string(i + 1) + " = j" + std::to_string(k + 1) +
                                  " identically (set allow_equal to permit)");
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

IntPoly parse_coeffs(std::string s, int line) {
    for (char& ch : s)
        if (ch == ',' || ch == '[' || ch == ']') ch = ' ';
    std::istringstream is(s);
    std::vector<mpz_class> c;
    std::string tok;
    while (is >> tok) {
        mpz_class v;
        if (v.set_str(tok, 10) != 0) throw ParseError("curve line " + std::to_string(line) + ": bad integer '" + tok + "'");
        c.push_back(v);
    }
    if (c.empty()) throw ParseError("curve line " + std::to_string(line) + ": empty coefficient list");
    return IntPoly(std::move(c));
}

}  // namespace

CurveModel parse_curve(std::istream& in) {
    CurveModel curve;
    std::map<int, RatFunc> maps;
    std::map<int, std::string> roles;
    bool have_n = false;
    std::string raw;
    int line = 0;
    static const std::regex map_re(R"(j(\d+))"), role_re(R"(role(\d+))");
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw.substr(0, raw.find('#')));
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("curve line " + std::to_string(line) + ": expected '='");
        std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
        std::smatch m;
        if (key == "n") {
            try {
                curve.n = std::stoi(val);
            } catch (const std::exception&) {
                throw ParseError("curve line " + std::to_string(line) + ": bad n");
            }
            have_n = true;
        } else if (key == "allow_equal") {
            curve.allow_equal = val == "true" || val == "1";
        } else if (std::regex_match(key, m, map_re)) {
            int i = std::stoi(m[1]);
            auto slash = val.find('/');
            IntPoly num = parse_coeffs(val.substr(0, slash), line);
            IntPoly den = slash == std::string::npos ? IntPoly::constant(1) : parse_coeffs(val.substr(slash + 1), line);
            if (den.is_zero()) throw ParseError("curve line " + std::to_string(line) + ": zero denominator");
            if (!maps.emplace(i, RatFunc(num, den)).second)
                throw ParseError("curve line " + std::to_string(line) + ": j" + std::to_string(i) + " given twice");
        } else if (std::regex_match(key, m, role_re)) {
            if (val != "smooth" && val != "cm" && val != "singular")
                throw ParseError("curve line " + std::to_string(line) + ": role must be smooth, cm or singular");
            roles[std::stoi(m[1])] = val;
        } else {
            throw ParseError("curve line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    if (!have_n) throw ParseError("curve: missing 'n = ...'");
    for (int i = 1; i <= curve.n; ++i) {
        auto it = maps.find(i);
        if (it == maps.end()) throw ParseError("curve: missing j" + std::to_string(i));
        curve.maps.push_back(it->second);
    }
    if (static_cast<int>(maps.size()) != curve.n) throw ParseError("curve: map index outside 1..n");
    if (!roles.empty()) {
        for (int i = 1; i <= curve.n; ++i) curve.roles.push_back(roles.count(i) ? roles[i] : "smooth");
    }
    curve.validate();
    return curve;
}

CurveModel parse_curve_text(const std::string& text) {
    std::istringstream is(text);
    return parse_curve(is);
}

CurveModel read_curve_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open curve file " + path);
    return parse_curve(f);
}

IntPoly stratum_poly(const CurveModel& curve, int i1, int i2, const ModularPolynomial& phi) {
    if (i1 < 1 || i2 < 1 || i1 > curve.n || i2 > curve.n || i1 == i2) throw DomainError("stratum_poly: bad coordinate pair");
    return phi_specialize(phi, curve.maps[i1 - 1], curve.maps[i2 - 1]);
}

IntPoly stratum_poly(const CurveModel& curve, int i1, int i2, long M) {
    return stratum_poly(curve, i1, i2, modular_polynomial(M));
}

Real phi_relative_value(const ModularPolynomial& phi, const Complex& x, const Complex& y) {
    mpfr_prec_t bits = std::max(x.precision(), y.precision());
    Real ax = abs(x), ay = abs(y);
    Real scale(bits);
    Real px(1L, bits);
    for (int i = 0; i <= phi.degree(); ++i) {
        Real py(1L, bits);
        for (int k = 0; k < static_cast<int>(phi.coeffs[i].size()); ++k) {
            if (phi.coeffs[i][k] != 0) scale += Real(mpz_class(abs(phi.coeffs[i][k])), bits) * px * py;
            py = py * ay;
        }
        px = px * ax;
    }
    Real v = abs(phi.eval(x, y));
    return scale.is_zero() ? v : v / scale;
}

namespace {

bool is_singular_modulus(const Complex& j, const PrecisionContext& ctx) {
    if (!j.is_finite()) return false;
    try {
        Complex tau = inverse_j(j, ctx);
        return detect_cm(tau, 100, ctx).has_value();
    } catch (const Error&) {
        return false;
    }
}

Real coordinate_height(const IntPoly& defining, const RatFunc& f, const PrecisionContext& ctx) {
    IntPoly img = squarefree(image_polynomial(defining, f));
    return mahler_height(img, ctx);
}

}  // namespace

ScanPoint make_scan_point(const CurveModel& curve, const IntPoly& defining, const LevelPair& p1,
                          const std::optional<LevelPair>& p2, bool flag_singular, const PrecisionContext& ctx) {
    ScanPoint sp;
    sp.pair1 = p1;
    sp.pair2 = p2;
    sp.points = isolate_points(defining, ctx);
    sp.height_t = mahler_height(sp.points.defining, ctx);
    for (const auto& f : curve.maps) sp.heights_j.push_back(coordinate_height(sp.points.defining, f, ctx));
    sp.soundness = ctx.zero();
    std::vector<std::vector<Complex>> values(curve.n);
    for (int i = 0; i < curve.n; ++i)
        for (const auto& r : sp.points.roots) values[i].push_back(curve.maps[i].eval(r));
    auto check = [&](const LevelPair& p) {
        const auto& phi = modular_polynomial(p.M);
        for (std::size_t r = 0; r < sp.points.roots.size(); ++r)
            sp.soundness = max(sp.soundness, phi_relative_value(phi, values[p.i1 - 1][r], values[p.i2 - 1][r]));
    };
    check(p1);
    if (p2) check(*p2);
    for (int i = 0; i < curve.n; ++i) {
        bool all = flag_singular && !values[i].empty();
        for (std::size_t r = 0; all && r < values[i].size(); ++r) all = is_singular_modulus(values[i][r], ctx);
        sp.singular_modulus.push_back(all);
    }
    return sp;
}

std::size_t ScanResult::double_count() const {
    std::size_t c = 0;
    for (const auto& p : points) c += p.pair2 ? 1 : 0;
    return c;
}

namespace {

struct Stratum {
    LevelPair lp;
    IntPoly poly;
    bool degenerate = false;
};

std::vector<std::pair<int, int>> all_pairs(const CurveModel& curve, const std::vector<std::pair<int, int>>& pairs) {
    if (!pairs.empty()) {
        for (auto [a, b] : pairs)
            if (a < 1 || b < 1 || a > curve.n || b > curve.n || a == b) throw DomainError("scan: bad coordinate pair");
        return pairs;
    }
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= curve.n; ++i)
        for (int k = i + 1; k <= curve.n; ++k) out.emplace_back(i, k);
    return out;
}

/// Runs f(0..count-1) on `jobs` threads; results are written by index.
template <class F>
void parallel_for(std::size_t count, int jobs, F f) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

bool same_pair(const LevelPair& a, const LevelPair& b) {
    return (a.i1 == b.i1 && a.i2 == b.i2) || (a.i1 == b.i2 && a.i2 == b.i1);
}

}  // namespace

ScanResult scan(const CurveModel& curve, const ScanOptions& opt, const PrecisionContext& ctx) {
    curve.validate();
    auto pairs = all_pairs(curve, opt.pairs);
    std::vector<long> exact, numeric;
    for (long M : opt.levels) {
        if (M < 1) throw DomainError("scan: levels must be positive");
        (M <= opt.max_exact_level ? exact : numeric).push_back(M);
    }
    for (long M : exact) modular_polynomial(M);

    std::vector<Stratum> strata;
    for (auto [a, b] : pairs)
        for (long M : exact) strata.push_back({{a, b, M}, {}, false});
    parallel_for(strata.size(), opt.jobs, [&](std::size_t i) {
        try {
            strata[i].poly = stratum_poly(curve, strata[i].lp.i1, strata[i].lp.i2, strata[i].lp.M);
        } catch (const DegenerateInput&) {
            strata[i].degenerate = true;
        }
    });

    struct Task {
        LevelPair p1;
        std::optional<LevelPair> p2;
        IntPoly defining;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < strata.size(); ++i)
        for (std::size_t k = i + 1; k < strata.size(); ++k) {
            const auto& s1 = strata[i];
            const auto& s2 = strata[k];
            if (s1.degenerate || s2.degenerate || same_pair(s1.lp, s2.lp)) continue;
            IntPoly g = gcd(s1.poly, s2.poly);
            if (g.degree() >= 1) tasks.push_back({s1.lp, s2.lp, squarefree(g)});
        }
    if (opt.single_stratum || !numeric.empty())
        for (const auto& s : strata)
            if (!s.degenerate && s.poly.degree() >= 1) tasks.push_back({s.lp, std::nullopt, squarefree(s.poly)});

    ScanResult res;
    res.points.resize(tasks.size());
    parallel_for(tasks.size(), opt.jobs, [&](std::size_t i) {
        res.points[i] = make_scan_point(curve, tasks[i].defining, tasks[i].p1, tasks[i].p2, opt.flag_singular_moduli, ctx);
    });

    // numeric-only confirmation for levels without exact Phi, at the roots of exact strata
    if (!numeric.empty()) {
        struct NTask {
            std::size_t point;
            std::size_t root;
            LevelPair lp;
        };
        std::vector<NTask> ntasks;
        for (std::size_t p = 0; p < res.points.size(); ++p) {
            const auto& sp = res.points[p];
            if (sp.pair2) continue;
            for (std::size_t r = 0; r < sp.points.roots.size(); ++r)
                for (auto [a, b] : pairs)
                    for (long N : numeric) {
                        LevelPair lp{a, b, N};
                        if (!same_pair(lp, sp.pair1)) ntasks.push_back({p, r, lp});
                    }
        }
        std::vector<std::optional<NumericOnlyHit>> hits(ntasks.size());
        parallel_for(ntasks.size(), opt.jobs, [&](std::size_t i) {
            const auto& t = ntasks[i];
            const auto& sp = res.points[t.point];
            const Complex& root = sp.points.roots[t.root];
            Complex x = curve.maps[t.lp.i1 - 1].eval(root), y = curve.maps[t.lp.i2 - 1].eval(root);
            if (!x.is_finite() || !y.is_finite()) return;
            Complex tau = inverse_j(y, ctx);
            Real best;
            bool first = true;
            for (const auto& jv : isogenous_j_values(t.lp.M, tau, ctx)) {
                Real d = abs(x - jv) / max(ctx.real(1L), abs(x));
                if (first || d < best) best = d;
                first = false;
            }
            if (!first && best < ctx.sqrt_tol()) hits[i] = NumericOnlyHit{sp.pair1, t.lp, root, best};
        });
        for (auto& h : hits)
            if (h) res.numeric_only.push_back(std::move(*h));
    }
    if (!opt.single_stratum)
        std::erase_if(res.points, [](const ScanPoint& sp) { return !sp.pair2; });
    return res;
}

std::vector<ScanPoint> unlikely_points(const CurveModel& curve, const std::vector<long>& levels,
                                       const std::vector<std::pair<int, int>>& pairs, const PrecisionContext& ctx) {
    ScanOptions opt;
    opt.levels = levels;
    opt.pairs = pairs;
    return scan(curve, opt, ctx).points;
}

std::vector<long> parse_levels(const std::string& spec) {
    std::vector<long> out;
    static const std::regex range_re(R"(\s*(\d+)\s*\.\.\s*(\d+)\s*)");
    std::smatch m;
    if (std::regex_match(spec, m, range_re)) {
        long lo = std::stol(m[1]), hi = std::stol(m[2]);
        if (lo < 1 || hi < lo) throw ParseError("levels: empty or invalid range '" + spec + "'");
        for (long M = lo; M <= hi; ++M) out.push_back(M);
        return out;
    }
    std::string s = spec;
    for (char& ch : s)
        if (ch == ',') ch = ' ';
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t used = 0;
            long v = std::stol(tok, &used);
            if (used != tok.size() || v < 1) throw ParseError("");
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("levels: bad entry '" + tok + "'");
        }
    }
    if (out.empty()) throw ParseError("levels: empty specification");
    return out;
}

}  // namespace zp
