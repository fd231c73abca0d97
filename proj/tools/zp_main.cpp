#include "selftest.hpp"

#include "zp/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace zp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

struct Globals {
    int precision = 0;
    std::uint64_t seed = 0;
    int jobs = 0;
    int tol_bits = 0;
    std::string out;
    std::string format = "json";
};

PrecisionContext make_context(const Globals& g) {
    int bits = g.precision > 0 ? g.precision : precision_from_environment();
    if (bits < kMinPrecisionBits) throw DomainError("precision must be at least 64 bits");
    if (g.tol_bits <= 0) return PrecisionContext(bits);
    if (g.tol_bits >= bits) throw DomainError("--tol-bits must be below the precision");
    return PrecisionContext(bits, power_of_two(-g.tol_bits, bits));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

long to_long(const std::string& s) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("not an integer: '" + s + "'");
    return v;
}

/// "re,im" with decimal parts, or "q:n,d,D" for (n + sqrt(D))/d.
Complex parse_complex(const std::string& text, const PrecisionContext& ctx) {
    if (text.rfind("q:", 0) == 0) {
        auto p = split(text.substr(2), ',');
        if (p.size() != 3) throw ParseError("expected q:n,d,D");
        long n = to_long(p[0]), d = to_long(p[1]), D = to_long(p[2]);
        if (d == 0) throw DomainError("zero denominator");
        Complex root = D < 0 ? Complex(ctx.zero(), sqrt(ctx.real(-D))) : ctx.complex(sqrt(ctx.real(D)));
        return (ctx.complex(ctx.real(n)) + root) / ctx.complex(ctx.real(d));
    }
    auto p = split(text, ',');
    if (p.size() != 2) throw ParseError("expected RE,IM: '" + text + "'");
    try {
        return {Real::from_string(p[0], ctx.bits()), Real::from_string(p[1], ctx.bits())};
    } catch (const std::exception&) {
        throw ParseError("bad complex number '" + text + "'");
    }
}

CyclicSublattice parse_sub(const std::string& text) {
    auto p = split(text, ',');
    if (p.size() != 3) throw ParseError("expected a,b,d");
    CyclicSublattice s{to_long(p[0]), to_long(p[1]), to_long(p[2])};
    if (s.a <= 0 || s.d <= 0 || s.b < 0 || s.b >= s.d) throw DomainError("sublattice needs a, d > 0 and 0 <= b < d");
    if (std::gcd(std::gcd(s.a, s.b), s.d) != 1) throw DomainError("sublattice is not cyclic");
    return s;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
    std::vector<std::pair<int, int>> out;
    if (text == "all") return out;
    for (const auto& item : split(text, ',')) {
        auto p = split(item, '-');
        if (p.size() != 2) throw ParseError("expected pairs like 1-2,2-3");
        out.emplace_back(static_cast<int>(to_long(p[0])), static_cast<int>(to_long(p[1])));
    }
    return out;
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (!f) throw DomainError("cannot write " + g.out);
    f << text;
}

int emit_json(const Globals& g, const json& doc) {
    emit(g, doc.dump(2) + "\n");
    return doc.value("passed", true) ? kExitOk : kExitVerification;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_instance(const std::string& path, const RelationInstance& inst, const RunInfo& run) {
    std::ofstream f(path);
    if (!f) throw DomainError("cannot write " + path);
    f << instance_to_json(inst, run).dump(2) << "\n";
}

int relation_output(const Globals& g, const RelationInstance& inst, int attempts, const std::string& dump,
                    const PrecisionContext& ctx, const RunInfo& run) {
    if (!dump.empty()) write_instance(dump, inst, run);
    auto w = evaluate_instance(inst, ctx);
    auto pc = check_polynomial(w, inst, attempts, run.seed, ctx);
    json doc = relation_json(w, pc, ctx, run);
    if (!dump.empty()) doc["instance"] = dump;
    return emit_json(g, doc);
}

Real phi_scale(const ModularPolynomial& P, const Complex& x, const Complex& y) {
    Real ax = abs(x), ay = abs(y), total(x.precision());
    for (int i = 0; i <= P.degree(); ++i)
        for (int k = 0; k < static_cast<int>(P.coeffs[i].size()); ++k)
            if (P.coeffs[i][k] != 0) total = total + abs(Real(P.coeffs[i][k], x.precision())) * pow(ax, i) * pow(ay, k);
    return total;
}

std::string reduced_key(const Complex& tau, const PrecisionContext& ctx) { return reduce_tau(tau, ctx).tau.to_string(20); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periods, isogeny relations and unlikely-intersection scans"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--precision", g.precision, "working precision in bits (default: ZP_PRECISION_BITS or 256)");
    app.add_option("--seed", g.seed, "seed recorded in every output");
    app.add_option("--jobs", g.jobs, "worker threads (default: available cores)");
    app.add_option("--tol-bits", g.tol_bits, "override tol = 2^-T");
    app.add_option("--out", g.out, "write output to this file");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* periods = app.add_subcommand("periods", "full period matrix of a lattice");
    std::string tau_s, lattice_s;
    auto* tau_opt = periods->add_option("--tau", tau_s, "RE,IM or q:n,d,D");
    periods->add_option("--lattice", lattice_s, "W1RE,W1IM,W2RE,W2IM")->excludes(tau_opt);

    auto* isogeny = app.add_subcommand("isogeny", "cyclic isogenies");
    isogeny->require_subcommand(1);
    auto* iso_verify = isogeny->add_subcommand("verify", "verify the period identity for cyclic sublattices");
    std::string iso_tau, iso_sub;
    long iso_degree = 0;
    iso_verify->add_option("--tau", iso_tau)->required();
    iso_verify->add_option("--degree", iso_degree)->required()->check(CLI::PositiveNumber);
    auto* all_flag = iso_verify->add_flag("--all-sublattices");
    iso_verify->add_option("--sub", iso_sub, "a,b,d")->excludes(all_flag);

    auto* phi = app.add_subcommand("phi", "modular polynomials");
    phi->require_subcommand(1);
    long phi_level = 0;
    auto* phi_exact = phi->add_subcommand("exact", "integer coefficient table");
    phi_exact->add_option("--level", phi_level)->required()->check(CLI::Range(1L, 7L));
    auto* phi_eval = phi->add_subcommand("eval", "compare exact and numeric evaluation at (x, j(tau))");
    std::string phi_tau, phi_x;
    phi_eval->add_option("--level", phi_level)->required()->check(CLI::Range(1L, 7L));
    phi_eval->add_option("--tau", phi_tau)->required();
    phi_eval->add_option("--x", phi_x)->required();

    auto* rel = app.add_subcommand("relations", "relations between period coordinates");
    rel->require_subcommand(1);
    std::string dump;
    int attempts = 5;
    SyntheticOptions syn;
    auto* rel_second = rel->add_subcommand("second-way", "two CM coordinates linked by an isogeny");
    std::string tau2_s, tau3_s, rel_sub;
    long rel_degree = 2;
    bool rel_synthetic = false;
    rel_second->add_option("--tau2", tau2_s);
    rel_second->add_option("--tau3", tau3_s);
    rel_second->add_option("--degree", rel_degree)->check(CLI::PositiveNumber);
    rel_second->add_option("--sub", rel_sub, "a,b,d");
    rel_second->add_flag("--synthetic", rel_synthetic);
    auto* rel_first = rel->add_subcommand("first-way", "CM source, singular target");
    rel_first->add_flag("--synthetic", rel_synthetic)->required();
    auto* rel_n4 = rel->add_subcommand("n4", "two first-way pairs on four coordinates");
    for (auto* sc : {rel_first, rel_n4, rel_second}) {
        sc->add_option("--dump-instance", dump, "also write the instance JSON");
        sc->add_option("--attempts", attempts)->check(CLI::Range(1, 1000));
    }
    for (auto* sc : {rel_first, rel_n4, rel_second}) {
        if (sc != rel_second) sc->add_option("--degree", syn.degree)->check(CLI::PositiveNumber);
        sc->add_flag("--zero-r", syn.zero_r);
        sc->add_flag("--zero-s", syn.zero_s);
        sc->add_flag("--random-pi", syn.random_pi);
    }

    auto* check = app.add_subcommand("check-relation", "relation and polynomial certificate for a stored instance");
    std::string inst_path;
    check->add_option("--instance", inst_path)->required()->check(CLI::ExistingFile);
    check->add_option("--attempts", attempts)->check(CLI::Range(1, 1000));

    auto* scan_cmd = app.add_subcommand("scan", "points with two unlikely isogenies on a rational curve");
    std::string curve_path, levels_s = "2,3", pairs_s = "all";
    bool no_single = false, no_flags = false;
    long max_exact = 5;
    scan_cmd->add_option("--curve", curve_path)->required()->check(CLI::ExistingFile);
    scan_cmd->add_option("--levels", levels_s, "e.g. 2..5 or 2,3,7");
    scan_cmd->add_option("--pairs", pairs_s, "all or 1-2,2-3");
    scan_cmd->add_option("--max-exact-level", max_exact)->check(CLI::Range(1L, 7L));
    scan_cmd->add_flag("--no-single", no_single, "omit single-stratum points");
    scan_cmd->add_flag("--no-singular-flags", no_flags, "skip singular-modulus detection");

    auto* report = app.add_subcommand("report", "reformat a scan report");
    std::string report_in;
    report->add_option("--in", report_in)->required()->check(CLI::ExistingFile);

    auto* selftest = app.add_subcommand("selftest", "fast invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        PrecisionContext ctx = make_context(g);
        RunInfo run{ctx.bits(), g.seed};
        int jobs = g.jobs > 0 ? g.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

        if (*periods) {
            Lattice lat;
            if (!lattice_s.empty()) {
                auto p = split(lattice_s, ',');
                if (p.size() != 4) throw ParseError("expected W1RE,W1IM,W2RE,W2IM");
                lat = {parse_complex(p[0] + "," + p[1], ctx), parse_complex(p[2] + "," + p[3], ctx)};
            } else if (!tau_s.empty()) {
                lat = Lattice::from_tau(parse_complex(tau_s, ctx), ctx);
            } else {
                throw ParseError("periods needs --tau or --lattice");
            }
            lat.validate();
            return emit_json(g, periods_json(lat, full_period_matrix(lat, ctx), ctx, run));
        }
        if (*iso_verify) {
            Complex tau = parse_complex(iso_tau, ctx);
            Lattice lat = Lattice::from_tau(tau, ctx);
            lat.validate();
            std::vector<CyclicSublattice> subs;
            if (!iso_sub.empty()) {
                subs.push_back(parse_sub(iso_sub));
                if (subs[0].M() != iso_degree) throw DomainError("sublattice index differs from --degree");
            } else {
                subs = cyclic_sublattices(iso_degree);
            }
            std::vector<IsogenyRecord> recs;
            for (const auto& s : subs) recs.push_back(build_isogeny(lat, s, ctx));
            return emit_json(g, isogeny_json(tau, iso_degree, recs, ctx, run));
        }
        if (*phi_exact) return emit_json(g, phi_json(modular_polynomial(phi_level), run));
        if (*phi_eval) {
            Complex tau = parse_complex(phi_tau, ctx);
            Complex x = parse_complex(phi_x, ctx);
            if (!(tau.im > 0)) throw DomainError("tau must lie in the upper half-plane");
            const auto& P = modular_polynomial(phi_level);
            Complex y = j_invariant(tau, ctx);
            Complex exact = P.eval(x, y);
            Complex numeric = phi_eval_numeric(phi_level, x, tau, ctx);
            Real diff = abs(exact - numeric) / max(ctx.real(1L), phi_scale(P, x, y));
            json doc = header("zp.phi_eval/1", run);
            doc["level"] = phi_level;
            doc["x"] = to_json(x);
            doc["tau"] = to_json(tau);
            doc["y"] = to_json(y);
            doc["exact"] = to_json(exact);
            doc["numeric"] = to_json(numeric);
            doc["relative_difference"] = to_number(diff);
            doc["passed"] = diff < ctx.sqrt_tol();
            return emit_json(g, doc);
        }
        if (*rel_first) return relation_output(g, synthetic_first_way(g.seed, syn, ctx), attempts, dump, ctx, run);
        if (*rel_n4) {
            SyntheticOptions second = syn;
            second.degree = syn.degree + 1;
            return relation_output(g, synthetic_four_coordinate(g.seed, syn, second, ctx), attempts, dump, ctx, run);
        }
        if (*rel_second) {
            if (rel_synthetic) {
                syn.degree = rel_degree;
                return relation_output(g, synthetic_second_way(g.seed, syn, ctx), attempts, dump, ctx, run);
            }
            if (tau2_s.empty()) throw ParseError("second-way needs --tau2 or --synthetic");
            Complex tau2 = parse_complex(tau2_s, ctx);
            Lattice lat = Lattice::from_tau(tau2, ctx);
            lat.validate();
            std::optional<CyclicSublattice> chosen;
            if (!rel_sub.empty()) {
                chosen = parse_sub(rel_sub);
            } else if (!tau3_s.empty()) {
                std::string want = reduced_key(parse_complex(tau3_s, ctx), ctx);
                for (const auto& s : cyclic_sublattices(rel_degree))
                    if (reduced_key(isogeny_pair(lat, s, ctx).target.tau(), ctx) == want) {
                        chosen = s;
                        break;
                    }
                if (!chosen) throw DomainError("no cyclic sublattice of this degree maps tau2 to tau3");
            } else {
                chosen = cyclic_sublattices(rel_degree).front();
            }
            return relation_output(g, genuine_second_way(tau2, *chosen, ctx), attempts, dump, ctx, run);
        }
        if (*check) {
            auto inst = instance_from_json(read_json_file(inst_path), ctx);
            auto w = evaluate_instance(inst, ctx);
            auto pc = check_polynomial(w, inst, attempts, g.seed, ctx);
            return emit_json(g, check_relation_json(w, pc, ctx, run));
        }
        if (*scan_cmd) {
            auto curve = read_curve_file(curve_path);
            ScanOptions opt;
            opt.levels = parse_levels(levels_s);
            opt.pairs = parse_pairs(pairs_s);
            opt.max_exact_level = max_exact;
            opt.single_stratum = !no_single;
            opt.flag_singular_moduli = !no_flags;
            opt.jobs = jobs;
            auto res = scan(curve, opt, ctx);
            json doc = scan_report_json(curve, opt, res, run);
            if (g.format == "csv")
                emit(g, scan_report_csv(doc));
            else
                emit(g, doc.dump(2) + "\n");
            return kExitOk;
        }
        if (*report) {
            json doc = read_json_file(report_in);
            if (doc.value("schema", "") != "zp.scan_report/1") throw ParseError("not a scan report");
            if (g.format == "csv")
                emit(g, scan_report_csv(doc));
            else
                emit(g, doc.dump(2) + "\n");
            return kExitOk;
        }
        if (*selftest) return emit_json(g, run_selftest(ctx, run));
    } catch (const StructureViolation& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const NonConvergence& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
