#include "zp/json_io.hpp"

#include "zp/errors.hpp"

#include <cmath>
#include <sstream>

namespace zp {

json header(const std::string& schema, const RunInfo& run) {
    return {{"schema", schema}, {"precision_bits", run.bits}, {"seed", run.seed}};
}

namespace {

int digits_for(mpfr_prec_t bits) { return static_cast<int>(static_cast<double>(bits) * 0.30103) + 3; }

json pair_json(const LevelPair& p) { return {{"i1", p.i1}, {"i2", p.i2}, {"M", p.M}}; }

std::string role_name(Role r) { return r == Role::Cm ? "cm" : "singular"; }

}  // namespace

json to_json(const Complex& z) {
    int d = digits_for(z.precision());
    return {{"re", z.re.to_string(d)}, {"im", z.im.to_string(d)}};
}

json to_json(const Mat2& m) {
    return json::array({json::array({to_json(m(0, 0)), to_json(m(0, 1))}), json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

Complex complex_from_json(const json& j, mpfr_prec_t bits) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) throw ParseError("complex value needs re and im");
    auto part = [&](const json& v) {
        if (v.is_string()) return Real::from_string(v.get<std::string>(), bits);
        if (v.is_number()) return Real(v.get<double>(), bits);
        throw ParseError("complex part must be a string or number");
    };
    return {part(j.at("re")), part(j.at("im"))};
}

Mat2 mat2_from_json(const json& j, mpfr_prec_t bits) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2)
        throw ParseError("matrix must be a 2x2 array");
    return {complex_from_json(j[0][0], bits), complex_from_json(j[0][1], bits), complex_from_json(j[1][0], bits),
            complex_from_json(j[1][1], bits)};
}

double to_number(const Real& x) { return x.to_double(); }

json periods_json(const Lattice& lat, const FullPeriodMatrix& P, const PrecisionContext& ctx, const RunInfo& run) {
    json out = header("zp.periods/1", run);
    auto red = reduce_tau(lat.tau(), ctx);
    out["tau"] = to_json(lat.tau());
    out["tau_reduced"] = to_json(red.tau);
    out["j"] = to_json(j_invariant(lat.tau(), ctx));
    out["omega"] = json::array({to_json(P.p(0, 0)), to_json(P.p(0, 1))});
    out["eta"] = json::array({to_json(P.p(1, 0)), to_json(P.p(1, 1))});
    out["det"] = to_json(P.p.det());
    out["legendre_residual"] = to_number(P.legendre_residual);
    out["tol"] = to_number(ctx.tol());
    auto cm = detect_cm(lat.tau(), 100, ctx);
    if (cm)
        out["cm"] = {{"disc", cm->disc}, {"a", cm->a}, {"b", cm->b}, {"c", cm->c}, {"residual", to_number(cm->residual)}};
    else
        out["cm"] = nullptr;
    out["passed"] = P.legendre_residual < ctx.tol() * abs(ctx.two_pi_i());
    return out;
}

json isogeny_json(const Complex& tau, long M, const std::vector<IsogenyRecord>& recs, const PrecisionContext& ctx,
                  const RunInfo& run) {
    json out = header("zp.isogeny/1", run);
    out["tau"] = to_json(tau);
    out["degree"] = M;
    json ws = json::array();
    bool all = true;
    for (const auto& r : recs) {
        const auto& h = r.witness.homology;
        bool ok = r.check.passed(ctx);
        all = all && ok;
        ws.push_back({{"sublattice", {r.sub.a, r.sub.b, r.sub.d}},
                      {"target_tau", to_json(r.target.tau())},
                      {"homology", {h.a, h.b, h.c, h.d}},
                      {"de_rham", {{"a", to_json(r.witness.de_rham.a)}, {"b", to_json(r.witness.de_rham.b)}, {"c", to_json(r.witness.de_rham.c)}}},
                      {"residual", to_number(r.check.residual)},
                      {"scale", to_number(r.check.scale)},
                      {"det_residual", to_number(r.check.det_residual)},
                      {"homology_det_ok", r.check.homology_det_ok},
                      {"passed", ok}});
    }
    out["witnesses"] = ws;
    out["passed"] = all;
    return out;
}

json phi_json(const ModularPolynomial& phi, const RunInfo& run) {
    json out = header("zp.phi/1", run);
    out["level"] = phi.N;
    out["degree"] = phi.degree();
    out["symmetric"] = phi.is_symmetric();
    out["provenance"] = phi.provenance == ModularPolynomial::Provenance::Recovered ? "recovered" : "supplied";
    json cs = json::array();
    std::size_t digits = 0;
    for (int i = 0; i <= phi.degree(); ++i)
        for (int k = 0; k < static_cast<int>(phi.coeffs[i].size()); ++k) {
            const auto& c = phi.coeffs[i][k];
            if (c == 0) continue;
            std::string s = c.get_str();
            digits = std::max(digits, s.size() - (s[0] == '-' ? 1 : 0));
            cs.push_back({{"i", i}, {"k", k}, {"c", s}});
        }
    out["coefficients"] = cs;
    out["max_digits"] = digits;
    out["passed"] = phi.is_symmetric();
    return out;
}

PolynomialCheck check_polynomial(const RelationWitness& w, const RelationInstance& inst, int attempts,
                                 std::uint64_t seed, const PrecisionContext& ctx) {
    PolynomialCheck pc;
    auto R = build_R(w, ctx);
    pc.degree = R.degree();
    pc.homogeneous = R.is_homogeneous();
    pc.terms = R.size();
    pc.vanishing_residual = relative_value(R, instance_values(inst), ctx.bits());
    pc.nonmembership = not_in_I0(R, ideal_for(w), attempts, seed, ctx);
    return pc;
}

bool polynomial_check_passed(const PolynomialCheck& pc, const PrecisionContext& ctx) {
    return pc.homogeneous && pc.vanishing_residual < ctx.tol() && pc.nonmembership.certified();
}

json certificate_json(const NonMembershipCertificate& c) {
    json out = {{"status", c.certified() ? "certificate" : "inconclusive"}, {"attempts", c.attempts_used}};
    if (c.certified()) {
        json pt = json::array();
        for (const auto& [v, q] : c.point) pt.push_back({{"var", Var::from_id(v).name()}, {"value", q.get_str()}});
        out["point"] = pt;
        out["value"] = to_json(c.value);
        out["threshold"] = to_number(c.threshold);
    }
    return out;
}

namespace {

json witness_core(const RelationWitness& w) {
    json H = json::array();
    for (const auto& h : w.H) H.push_back(to_json(h));
    json flags = {{"vanishing", nullptr}};
    if (w.vanishing) flags["vanishing"] = "H" + std::to_string(*w.vanishing + 1);
    return {{"way", to_string(w.way)},
            {"case_id", w.case_id},
            {"H", H},
            {"rhs_integers", w.rhs},
            {"residual", to_number(w.residual)},
            {"scale", to_number(w.scale)},
            {"entry_residual", to_number(w.entry_residual)},
            {"degenerate_flags", flags}};
}

}  // namespace

json relation_json(const RelationWitness& w, const PolynomialCheck& pc, const PrecisionContext& ctx, const RunInfo& run) {
    json out = header("zp.relation/1", run);
    out.update(witness_core(w));
    out["holds"] = w.holds(ctx);
    out["polynomial"] = {{"degree", pc.degree},
                         {"homogeneous", pc.homogeneous},
                         {"terms", pc.terms},
                         {"vanishing_residual", to_number(pc.vanishing_residual)},
                         {"nonmembership", certificate_json(pc.nonmembership)}};
    out["passed"] = w.holds(ctx) && polynomial_check_passed(pc, ctx);
    return out;
}

json check_relation_json(const RelationWitness& w, const PolynomialCheck& pc, const PrecisionContext& ctx,
                         const RunInfo& run) {
    json out = header("zp.check_relation/1", run);
    out["case_id"] = w.case_id;
    out["way"] = to_string(w.way);
    out["identity_residual"] = to_number(w.residual);
    out["degree"] = pc.degree;
    out["homogeneous"] = pc.homogeneous;
    out["vanishing_residual"] = to_number(pc.vanishing_residual);
    out["nonmembership"] = certificate_json(pc.nonmembership);
    out["passed"] = w.holds(ctx) && polynomial_check_passed(pc, ctx);
    return out;
}

json instance_to_json(const RelationInstance& inst, const RunInfo& run) {
    json out = header("zp.instance/1", run);
    json cs = json::array();
    for (const auto& c : inst.coords) {
        json cj = {{"index", c.index}, {"role", role_name(c.role)}, {"h", to_json(c.period.h)},
                   {"pi1", to_json(c.pi1)}, {"pi2", to_json(c.pi2)}};
        if (c.role == Role::Cm)
            cj["varpi"] = to_json(c.period.varpi);
        else
            cj["structure"] = to_json(Mat2{c.period.d, c.period.e0, c.period.dprime, c.period.e0prime});
        cs.push_back(cj);
    }
    json ls = json::array();
    for (const auto& l : inst.links) {
        const auto& h = l.witness.homology;
        const auto& A = l.witness.de_rham;
        ls.push_back({{"source", l.source},
                      {"target", l.target},
                      {"M", l.witness.M},
                      {"de_rham", {{"a", to_json(A.a)}, {"b", to_json(A.b)}, {"c", to_json(A.c)}}},
                      {"homology", {h.a, h.b, h.c, h.d}}});
    }
    out["coords"] = cs;
    out["links"] = ls;
    return out;
}

RelationInstance instance_from_json(const json& j, const PrecisionContext& ctx) {
    try {
        RelationInstance inst;
        auto bits = ctx.bits();
        for (const auto& cj : j.at("coords")) {
            std::string role = cj.at("role").get<std::string>();
            StructuredPeriod sp;
            sp.h = mat2_from_json(cj.at("h"), bits);
            Role r;
            if (role == "cm") {
                r = Role::Cm;
                sp.kind = StructuredPeriod::Kind::Cm;
                sp.varpi = complex_from_json(cj.at("varpi"), bits);
            } else if (role == "singular") {
                r = Role::Singular;
                sp.kind = StructuredPeriod::Kind::Singular;
                Mat2 s = mat2_from_json(cj.at("structure"), bits);
                sp.d = s(0, 0);
                sp.e0 = s(0, 1);
                sp.dprime = s(1, 0);
                sp.e0prime = s(1, 1);
            } else {
                throw ParseError("coordinate role must be cm or singular");
            }
            Coordinate c(cj.at("index").get<int>(), r, sp, bits);
            if (cj.contains("pi1")) c.pi1 = mat2_from_json(cj["pi1"], bits);
            if (cj.contains("pi2")) c.pi2 = mat2_from_json(cj["pi2"], bits);
            inst.coords.push_back(std::move(c));
        }
        for (const auto& lj : j.at("links")) {
            IsogenyLink l;
            l.source = lj.at("source").get<int>();
            l.target = lj.at("target").get<int>();
            l.witness.M = lj.at("M").get<long>();
            const auto& A = lj.at("de_rham");
            l.witness.de_rham = {complex_from_json(A.at("a"), bits), complex_from_json(A.at("b"), bits),
                                 complex_from_json(A.at("c"), bits), ctx.zero()};
            auto h = lj.at("homology").get<std::vector<std::int64_t>>();
            if (h.size() != 4) throw ParseError("homology must have four entries");
            l.witness.homology = {h[0], h[1], h[2], h[3]};
            if (l.witness.homology.det() != l.witness.M) throw ParseError("homology determinant differs from M");
            l.witness.residual = ctx.zero();
            inst.links.push_back(std::move(l));
        }
        return inst;
    } catch (const json::exception& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
}

json scan_report_json(const CurveModel& curve, const ScanOptions& opt, const ScanResult& res, const RunInfo& run) {
    json out = header("zp.scan_report/1", run);
    json maps = json::array();
    for (const auto& f : curve.maps) maps.push_back(f.to_string("t"));
    out["curve"] = {{"n", curve.n}, {"maps", maps}, {"roles", curve.roles}};
    out["levels"] = opt.levels;
    std::vector<long> exact;
    for (long M : opt.levels)
        if (M <= opt.max_exact_level) exact.push_back(M);
    out["exact_levels"] = exact;
    json pairs = json::array();
    if (opt.pairs.empty()) {
        for (int i = 1; i <= curve.n; ++i)
            for (int k = i + 1; k <= curve.n; ++k) pairs.push_back({i, k});
    } else {
        for (auto [a, b] : opt.pairs) pairs.push_back({a, b});
    }
    out["pairs"] = pairs;

    json pts = json::array();
    std::vector<double> xs, ys;
    for (const auto& p : res.points) {
        json coeffs = json::array();
        for (const auto& c : p.points.defining.coeffs()) coeffs.push_back(c.get_str());
        json hj = json::array();
        for (const auto& h : p.heights_j) hj.push_back(to_number(h));
        json roots = json::array();
        for (const auto& r : p.points.roots) roots.push_back(to_json(r.with_precision(64)));
        pts.push_back({{"kind", p.pair2 ? "double" : "single"},
                       {"pair1", pair_json(p.pair1)},
                       {"pair2", p.pair2 ? pair_json(*p.pair2) : json(nullptr)},
                       {"t_minpoly", coeffs},
                       {"t_minpoly_text", p.points.defining.to_string("t")},
                       {"degree_bound", p.points.degree_bound},
                       {"height_t", to_number(p.height_t)},
                       {"heights_j", hj},
                       {"j_is_singular_modulus", p.singular_modulus},
                       {"soundness", to_number(p.soundness)},
                       {"roots", roots}});
        long level = std::max(p.pair1.M, p.pair2 ? p.pair2->M : 0L);
        xs.push_back(std::log(static_cast<double>(level)));
        ys.push_back(std::log(static_cast<double>(std::max(1, p.points.degree_bound))));
    }
    out["points"] = pts;
    json num = json::array();
    for (const auto& h : res.numeric_only)
        num.push_back({{"exact_pair", pair_json(h.exact_pair)},
                       {"numeric_pair", pair_json(h.numeric_pair)},
                       {"t", to_json(h.t.with_precision(64))},
                       {"residual", to_number(h.residual)},
                       {"status", "numeric-only"}});
    out["numeric_only"] = num;
    out["summary"] = {{"double", res.double_count()},
                      {"single", res.points.size() - res.double_count()},
                      {"numeric_only", res.numeric_only.size()}};

    // least-squares slope of log degree_bound against log level, advisory only
    json slope = nullptr;
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        if (sxx > 0) slope = sxy / sxx;
    }
    out["advisory"] = {{"loglog_slope_degree_vs_level", slope}};
    return out;
}

std::string scan_report_csv(const json& report) {
    std::ostringstream os;
    os << "kind,i1,i2,M,i3,i4,N,degree_bound,height_t,heights_j,singular_moduli,t_minpoly\n";
    for (const auto& p : report.at("points")) {
        const auto& a = p.at("pair1");
        os << p.at("kind").get<std::string>() << "," << a.at("i1") << "," << a.at("i2") << "," << a.at("M") << ",";
        if (p.at("pair2").is_null()) {
            os << ",,,";
        } else {
            const auto& b = p.at("pair2");
            os << b.at("i1") << "," << b.at("i2") << "," << b.at("M") << ",";
        }
        os << p.at("degree_bound") << "," << p.at("height_t").dump() << ",";
        std::string sep;
        for (const auto& h : p.at("heights_j")) {
            os << sep << h.dump();
            sep = ";";
        }
        os << ",";
        sep.clear();
        for (const auto& f : p.at("j_is_singular_modulus")) {
            os << sep << (f.get<bool>() ? 1 : 0);
            sep = ";";
        }
        os << ",\"" << p.at("t_minpoly_text").get<std::string>() << "\"\n";
    }
    return os.str();
}

namespace {

bool type_matches(const json& doc, const std::string& t) {
    if (t == "object") return doc.is_object();
    if (t == "array") return doc.is_array();
    if (t == "string") return doc.is_string();
    if (t == "integer") return doc.is_number_integer();
    if (t == "number") return doc.is_number();
    if (t == "boolean") return doc.is_boolean();
    if (t == "null") return doc.is_null();
    return false;
}

void check(const json& doc, const json& schema, const json& root, const std::string& path,
           std::vector<std::string>& errors) {
    if (schema.is_boolean()) {
        if (!schema.get<bool>()) errors.push_back(path + ": not allowed");
        return;
    }
    if (schema.contains("$ref")) {
        std::string ref = schema["$ref"].get<std::string>();
        if (ref.rfind("#/", 0) != 0) {
            errors.push_back(path + ": unsupported $ref " + ref);
            return;
        }
        check(doc, root.at(json::json_pointer(ref.substr(1))), root, path, errors);
        return;
    }
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) ok = type_matches(doc, t.get<std::string>());
        for (const auto& alt : t.is_array() ? t : json::array()) ok = ok || type_matches(doc, alt.get<std::string>());
        if (!ok) {
            errors.push_back(path + ": expected type " + t.dump());
            return;
        }
    }
    if (schema.contains("const") && doc != schema["const"]) errors.push_back(path + ": expected " + schema["const"].dump());
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& e : schema["enum"]) found = found || e == doc;
        if (!found) errors.push_back(path + ": value not in enum");
    }
    if (doc.is_number()) {
        if (schema.contains("minimum") && doc.get<double>() < schema["minimum"].get<double>())
            errors.push_back(path + ": below minimum");
        if (schema.contains("maximum") && doc.get<double>() > schema["maximum"].get<double>())
            errors.push_back(path + ": above maximum");
    }
    if (doc.is_object()) {
        for (const auto& r : schema.value("required", json::array()))
            if (!doc.contains(r.get<std::string>())) errors.push_back(path + ": missing " + r.get<std::string>());
        const json props = schema.value("properties", json::object());
        for (const auto& [k, v] : doc.items()) {
            if (props.contains(k)) {
                check(v, props[k], root, path + "/" + k, errors);
            } else if (schema.contains("additionalProperties")) {
                check(v, schema["additionalProperties"], root, path + "/" + k, errors);
            }
        }
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>())
            errors.push_back(path + ": too few items");
        if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>())
            errors.push_back(path + ": too many items");
        if (schema.contains("items"))
            for (std::size_t i = 0; i < doc.size(); ++i) check(doc[i], schema["items"], root, path + "/" + std::to_string(i), errors);
    }
    if (schema.contains("oneOf")) {
        int matches = 0;
        for (const auto& alt : schema["oneOf"]) {
            std::vector<std::string> sub;
            check(doc, alt, root, path, sub);
            matches += sub.empty() ? 1 : 0;
        }
        if (matches != 1) errors.push_back(path + ": matches " + std::to_string(matches) + " oneOf alternatives");
    }
}

}  // namespace

std::vector<std::string> validate_schema(const json& doc, const json& schema) {
    std::vector<std::string> errors;
    check(doc, schema, schema, "", errors);
    return errors;
}

}  // namespace zp
