// lelong: command-line front end.
//
// Subcommands:
//   lelong     exact + numeric Lelong number at points
//   lct        exact/interval + numeric singularity exponent at points
//   construct  emit the symmetrized difference-tower expression for a given k
//   verify     thm1 | restriction | radial | sandwich | levelset harnesses
//
// JSON in, JSON out, CSV side channel for annulus fits. Exit codes:
//   0 all checks pass, 1 at least one failure, 2 usage/input error,
//   3 no failures but at least one inconclusive result.

#include "lelong/estimators.hpp"
#include "lelong/newton.hpp"
#include "lelong/serialize.hpp"
#include "lelong/verify.hpp"

#include <CLI11.hpp>

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace lelong;

struct CommonArgs {
    std::string expr_path;
    std::vector<std::string> points;
    int k = 1;
    double c = 1.0;
    double r0 = 0.5;
    int annuli = 12;
    int samples = 4096;
    std::uint64_t seed = kDefaultSeed;
    double tol = 0.05;
    std::string out_path;
    std::string csv_path;
    bool no_timestamp = false;
    int slices = 20;
    int random_points = 200;
};

Complex parse_complex_component(const std::string& s) {
    const auto colon = s.find(':');
    try {
        if (colon == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw InputError("bad point component '" + s + "' (expected re or re:im)");
    }
}

CVector parse_point(const std::string& s) {
    CVector pt;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const std::string tok =
            comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
        if (tok.empty()) throw InputError("empty point component in '" + s + "'");
        pt.push_back(parse_complex_component(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return pt;
}

std::vector<CVector> parse_points(const std::vector<std::string>& specs, int arity) {
    std::vector<CVector> out;
    for (const auto& s : specs) {
        CVector pt = parse_point(s);
        if (static_cast<int>(pt.size()) != arity)
            throw InputError("point '" + s + "' has arity " + std::to_string(pt.size()) +
                                 ", expression has arity " + std::to_string(arity),
                             "arity-mismatch");
        out.push_back(std::move(pt));
    }
    if (out.empty()) out.emplace_back(arity, Complex(0.0, 0.0));
    return out;
}

AnnulusSchedule make_schedule(const CommonArgs& a) {
    AnnulusSchedule s;
    s.r0 = a.r0;
    s.annuli = a.annuli;
    s.samples_per_annulus = a.samples;
    s.seed = a.seed;
    s.validate();
    return s;
}

HarnessOptions make_harness(const CommonArgs& a) {
    HarnessOptions h;
    h.schedule = make_schedule(a);
    h.eval.seed = a.seed;
    h.tol = a.tol;
    h.lct_tol = a.tol;
    return h;
}

void emit(const Json& j, const CommonArgs& a) {
    if (a.out_path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(a.out_path);
    if (!out) throw InputError("cannot write report to '" + a.out_path + "'", "file");
    out << j.dump(2) << '\n';
}

Json report_header(const char* command, const CommonArgs& a) {
    Json j;
    j["command"] = command;
    j["expr"] = a.expr_path;
    j["seed"] = a.seed;
    if (!a.no_timestamp) j["generated_at"] = static_cast<long long>(std::time(nullptr));
    return j;
}

int exit_code_from_counts(int fails, int inconclusive) {
    if (fails > 0) return 1;
    if (inconclusive > 0) return 3;
    return 0;
}

int run_lelong(const CommonArgs& a) {
    const PshExpr expr = parse_expr_file(a.expr_path);
    const auto points = parse_points(a.points, expr.arity());
    const auto sched = make_schedule(a);
    EvalOptions eopts;
    eopts.seed = a.seed;

    Json j = report_header("lelong", a);
    Json results = Json::array();
    int inconclusive = 0;
    for (const auto& pt : points) {
        Json r;
        r["point"] = detail::format_point(pt);
        const auto ex = lelong_exact(expr, pt);
        r["exact"] = estimate_to_json(ex);
        const auto nu = lelong_numeric(expr, pt, sched, eopts);
        r["numeric"] = estimate_to_json(nu);
        if (!ex.available() && nu.inconclusive) ++inconclusive;
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    emit(j, a);
    return exit_code_from_counts(0, inconclusive);
}

int run_lct(const CommonArgs& a) {
    const PshExpr expr = parse_expr_file(a.expr_path);
    const auto points = parse_points(a.points, expr.arity());
    const auto sched = make_schedule(a);
    EvalOptions eopts;
    eopts.seed = a.seed;

    Json j = report_header("lct", a);
    Json results = Json::array();
    int inconclusive = 0;
    for (const auto& pt : points) {
        Json r;
        r["point"] = detail::format_point(pt);
        const auto ex = lct_exact(expr, pt);
        r["exact"] = estimate_to_json(ex);
        if (ex.infinite) {
            r["numeric"] = nullptr;
            r["note"] = "locally bounded: no numeric threshold to bracket";
        } else {
            Bracket br{0.01, 2.0 * expr.arity()};
            if (ex.available() && ex.exact) {
                br.lo = 0.5 * ex.lo();
                br.hi = 2.0 * ex.hi();
            }
            const auto nm = lct_numeric(expr, pt, br, a.tol, sched, eopts);
            r["numeric"] = estimate_to_json(nm);
            if (nm.inconclusive && !ex.available()) ++inconclusive;
            if (!a.csv_path.empty()) {
                const auto fit = integrability_verdict(expr, nm.mid(), pt, sched, eopts);
                std::ofstream csv(a.csv_path);
                if (!csv) throw InputError("cannot write CSV to '" + a.csv_path + "'", "file");
                fit.write_csv(csv);
            }
        }
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    emit(j, a);
    return exit_code_from_counts(0, inconclusive);
}

int run_construct(const CommonArgs& a) {
    const PshExpr expr = parse_expr_file(a.expr_path);
    const PshExpr phik = symmetrized_tower(expr, a.k);
    if (a.out_path.empty()) {
        std::cout << expr_to_json(phik).dump(2) << '\n';
        return 0;
    }
    write_expr_file(a.out_path, phik);
    return 0;
}

int finish_verify(const char* mode, std::vector<VerificationReport> reports,
                  const CommonArgs& a) {
    int fails = 0, inconclusive = 0;
    for (const auto& r : reports) {
        if (r.verdict == CheckVerdict::fail) ++fails;
        if (r.verdict == CheckVerdict::inconclusive) ++inconclusive;
    }
    Json j = report_header("verify", a);
    j["mode"] = mode;
    j["reports"] = reports_to_json(std::move(reports), /*include_timing=*/!a.no_timestamp);
    j["fail_count"] = fails;
    j["inconclusive_count"] = inconclusive;
    emit(j, a);
    return exit_code_from_counts(fails, inconclusive);
}

int run_verify_thm1(const CommonArgs& a) {
    const PshExpr expr = parse_expr_file(a.expr_path);
    const auto points = parse_points(a.points, expr.arity());
    return finish_verify("thm1", verify_theorem1(expr, a.k, points, make_harness(a)), a);
}

int run_verify_restriction(const CommonArgs& a) {
    const PshExpr expr = parse_expr_file(a.expr_path);
    auto points = parse_points(a.points, expr.arity());
    const auto slices = random_coordinate_diagonal_slices(expr.arity(), a.slices, a.seed);
    return finish_verify(
        "restriction",
        verify_restriction_monotonicity(expr, slices, points.front(), make_harness(a)), a);
}

int run_verify_radial(const CommonArgs& a) {
    const PshExpr expr = parse_expr_file(a.expr_path);
    std::vector<VerificationReport> reports{verify_radial_identity(expr, make_harness(a))};
    return finish_verify("radial", std::move(reports), a);
}

int run_verify_sandwich(const CommonArgs& a) {
    const PshExpr expr = parse_expr_file(a.expr_path);
    const auto points = parse_points(a.points, expr.arity());
    return finish_verify("sandwich",
                         verify_levelset_sandwich(expr, a.c, a.k, points, make_harness(a)), a);
}

int run_verify_levelset(const CommonArgs& a) {
    const PshExpr expr = parse_expr_file(a.expr_path);
    if (expr.kind() != NodeKind::log_abs_poly)
        throw ClassError("verify levelset: expression must be a log_abs_poly atom");
    const auto& poly = expr.as<LogAbsPolyData>().poly;
    const auto level = levelset_generators(poly, a.c);

    std::vector<CVector> points;
    for (const auto& s : a.points) points.push_back(parse_point(s));
    auto rng = substream(a.seed, 0xC0501u);
    for (int i = 0; i < a.random_points; ++i) {
        CVector pt(poly.nvars());
        for (auto& z : pt) z = 0.75 * Complex(gaussian(rng), gaussian(rng));
        points.push_back(std::move(pt));
    }
    points.emplace_back(poly.nvars(), Complex(0.0, 0.0));

    detail::Stopwatch sw;
    int disagreements = 0;
    for (const auto& pt : points) {
        const bool via_generators = level.member(pt);
        const bool via_ord = ord_at(poly, pt) >= level.order;
        if (via_generators != via_ord) ++disagreements;
    }
    VerificationReport r;
    r.statement = "corollary1";
    r.instance = "deg " + std::to_string(poly.total_degree()) + " poly, c=" + std::to_string(a.c);
    r.measured = {{"points", points.size()},
                  {"generators", level.generators.size()},
                  {"disagreements", disagreements}};
    r.predicted = "generator membership == (ord_at >= ceil(c)) at every point";
    r.verdict = disagreements == 0 ? CheckVerdict::pass : CheckVerdict::fail;
    r.seed = a.seed;
    r.runtime_ms = sw.ms();
    std::vector<VerificationReport> reports{std::move(r)};
    return finish_verify("levelset", std::move(reports), a);
}

void add_common_flags(CLI::App* cmd, CommonArgs& a, bool needs_expr = true) {
    auto* expr = cmd->add_option("--expr", a.expr_path, "expression JSON file");
    if (needs_expr) expr->required();
    cmd->add_option("--point", a.points,
                    "evaluation point, comma-separated complex components re:im (repeatable)");
    cmd->add_option("--k", a.k, "tower depth k >= 1");
    cmd->add_option("--c", a.c, "threshold parameter c > 0");
    cmd->add_option("--r0", a.r0, "outer annulus radius (0, 1]");
    cmd->add_option("--annuli", a.annuli, "number of dyadic annuli");
    cmd->add_option("--samples", a.samples, "samples per annulus");
    cmd->add_option("--seed", a.seed, "RNG seed");
    cmd->add_option("--tol", a.tol, "tolerance for comparisons and bisection");
    cmd->add_option("--out", a.out_path, "write the JSON report here (default stdout)");
    cmd->add_option("--csv", a.csv_path, "write an annulus-fit CSV here");
    cmd->add_flag("--no-timestamp", a.no_timestamp,
                  "omit timestamps/timings for byte-identical reports");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lelong numbers and complex singularity exponents of structured psh functions"};
    app.require_subcommand(1);

    CommonArgs a;

    auto* cmd_lelong = app.add_subcommand("lelong", "Lelong number at points (exact + numeric)");
    add_common_flags(cmd_lelong, a);

    auto* cmd_lct =
        app.add_subcommand("lct", "singularity exponent at points (exact/interval + numeric)");
    add_common_flags(cmd_lct, a);

    auto* cmd_construct =
        app.add_subcommand("construct", "emit the symmetrized difference tower for k");
    add_common_flags(cmd_construct, a);

    auto* cmd_verify = app.add_subcommand("verify", "statement harnesses");
    cmd_verify->require_subcommand(1);
    auto* v_thm1 = cmd_verify->add_subcommand("thm1", "tower identities and sandwich");
    add_common_flags(v_thm1, a);
    auto* v_restr = cmd_verify->add_subcommand("restriction", "restriction monotonicity");
    add_common_flags(v_restr, a);
    v_restr->add_option("--slices", a.slices, "number of random slices");
    auto* v_radial = cmd_verify->add_subcommand("radial", "radial identity lct*nu = n");
    add_common_flags(v_radial, a);
    auto* v_sand = cmd_verify->add_subcommand("sandwich", "level-set sandwich");
    add_common_flags(v_sand, a);
    auto* v_level = cmd_verify->add_subcommand("levelset", "log|poly| level-set generators");
    add_common_flags(v_level, a);
    v_level->add_option("--random-points", a.random_points, "random cross-validation points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_lelong->parsed()) return run_lelong(a);
        if (cmd_lct->parsed()) return run_lct(a);
        if (cmd_construct->parsed()) return run_construct(a);
        if (v_thm1->parsed()) return run_verify_thm1(a);
        if (v_restr->parsed()) return run_verify_restriction(a);
        if (v_radial->parsed()) return run_verify_radial(a);
        if (v_sand->parsed()) return run_verify_sandwich(a);
        if (v_level->parsed()) return run_verify_levelset(a);
    } catch (const Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
