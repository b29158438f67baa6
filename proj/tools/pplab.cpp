// pplab — command-line front end: oracle fields, p-Poisson solves, exponent
// scans, quasiregularity checks, conjugate transforms and bundled
// reproduction recipes, with JSON reports.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pplab/conjugate.hpp"
#include "pplab/exact.hpp"
#include "pplab/field_io.hpp"
#include "pplab/grid_ops.hpp"
#include "pplab/quasiregular.hpp"
#include "pplab/regularity.hpp"
#include "pplab/reproduce.hpp"
#include "pplab/solver.hpp"
#include "report_json.hpp"

using namespace pplab;
using pplab::tool::JsonWriter;

namespace {

const auto g_start = std::chrono::steady_clock::now();

std::string iso_timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

double elapsed_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - g_start).count();
}

// Variable run facts live under "metadata"; everything else in a report is
// byte-identical across identical invocations.
void append_metadata_and_write(JsonWriter& w, const std::string& path) {
    w.begin_object("metadata");
    w.field("timestamp", iso_timestamp());
    w.field("wall_time_seconds", elapsed_seconds());
    w.end_object();
    w.end_object();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << w.str() << '\n';
}

std::vector<double> parse_number_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        try {
            out.push_back(std::stod(cur));
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": cannot parse '" + cur + "'");
        }
        cur.clear();
    };
    for (char c : s) {
        if (c == ',') flush();
        else cur += c;
    }
    flush();
    return out;
}

Vec2 parse_vec2(const std::string& s, const char* what) {
    const auto v = parse_number_list(s, what);
    if (v.size() != 2) throw std::invalid_argument(std::string(what) + ": expected x,y");
    return {v[0], v[1]};
}

// --domain disc:<R> | square:<a> | annulus:<rin>:<rout>
std::shared_ptr<const Grid2D> make_domain(const std::string& spec, double spacing, Vec2 origin) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("domain: expected disc:<R>, square:<a> or annulus:<rin>:<rout>");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "disc") return Grid2D::disc(std::stod(rest), spacing, origin);
    if (kind == "square") return Grid2D::square(std::stod(rest), spacing, origin);
    if (kind == "annulus") {
        const auto sep = rest.find(':');
        if (sep == std::string::npos)
            throw std::invalid_argument("domain: annulus needs inner:outer radii");
        return Grid2D::annulus(std::stod(rest.substr(0, sep)), std::stod(rest.substr(sep + 1)),
                               spacing, origin);
    }
    throw std::invalid_argument("domain: unknown kind '" + kind + "'");
}

constexpr const char* kProfileLabels = "torsional, p-harmonic, lq";

RadialProfile profile_by_label(const std::string& label, double p, double q) {
    if (label == "torsional") return torsional_creep(p);
    if (label == "p-harmonic") return radial_p_harmonic(p);
    if (label == "lq") return lq_profile(p, q);
    throw std::invalid_argument("unknown oracle label '" + label +
                                "' (valid labels: " + std::string(kProfileLabels) + ")");
}

bool file_exists(const std::string& path) {
    std::ifstream is(path);
    return is.good();
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const std::string& what) {
    if (a.nx() != b.nx() || a.ny() != b.ny() || a.spacing() != b.spacing() ||
        a.domain_kind() != b.domain_kind() || a.param1() != b.param1() ||
        a.param2() != b.param2() || a.origin().x != b.origin().x || a.origin().y != b.origin().y)
        throw std::invalid_argument(what + ": grid header does not match the solve domain");
}

// Right-hand sides: oracle labels, const:<v>, or a field CSV on the same grid.
ScalarField load_rhs(const std::string& arg, std::shared_ptr<const Grid2D> grid, double p,
                     double q) {
    if (arg == "zero" || arg == "p-harmonic") return ScalarField(grid, 0.0);
    if (arg == "torsional") return ScalarField(grid, 2.0);
    if (arg.rfind("const:", 0) == 0) return ScalarField(grid, std::stod(arg.substr(6)));
    if (arg == "lq") {
        auto rhs = radial_p_poisson_rhs(lq_profile(p, q), p);
        const Vec2 c = grid->origin();
        return ScalarField::sample(grid, [&](Vec2 x) { return rhs(norm(x - c)); });
    }
    if (file_exists(arg)) {
        ScalarField f = read_field_csv(arg);
        require_same_grid(f.grid(), *grid, "--rhs");
        return f;
    }
    throw std::invalid_argument("unknown rhs label or missing file '" + arg +
                                "' (valid labels: torsional, zero, const:<v>, lq)");
}

// Boundary data: rendered oracle labels, affine:<ax>,<ay>,<c>, or a CSV.
ScalarField load_boundary(const std::string& arg, std::shared_ptr<const Grid2D> grid, double p,
                          double q) {
    if (arg == "zero") return ScalarField(grid, 0.0);
    if (arg.rfind("affine:", 0) == 0) {
        const auto c = parse_number_list(arg.substr(7), "--boundary affine");
        if (c.size() != 3) throw std::invalid_argument("--boundary affine:<ax>,<ay>,<c>");
        return ScalarField::sample(grid, [&](Vec2 x) { return c[0] * x.x + c[1] * x.y + c[2]; });
    }
    if (arg == "torsional" || arg == "p-harmonic" || arg == "lq")
        return render(profile_by_label(arg, p, q), grid);
    if (file_exists(arg)) {
        ScalarField f = read_field_csv(arg);
        require_same_grid(f.grid(), *grid, "--boundary");
        return f;
    }
    throw std::invalid_argument("unknown boundary label or missing file '" + arg +
                                "' (valid labels: torsional, p-harmonic, lq, zero, "
                                "affine:<ax>,<ay>,<c>)");
}

std::string dat_path_for(const std::string& json_path) {
    const auto dot = json_path.rfind('.');
    return (dot == std::string::npos ? json_path : json_path.substr(0, dot)) + ".dat";
}

// ---------------------------------------------------------------- solve ----
struct SolveArgs {
    double p = 2.0, q = std::numeric_limits<double>::infinity();
    std::string domain, rhs, boundary, out, report;
    double spacing = 0.0;
    std::string origin = "0,0";
    SolverConfig cfg;
    std::string eps_list;
};

int run_solve(const SolveArgs& a) {
    auto grid = make_domain(a.domain, a.spacing, parse_vec2(a.origin, "--origin"));
    SolverConfig cfg = a.cfg;
    cfg.p = a.p;
    if (!a.eps_list.empty()) cfg.eps_schedule = parse_number_list(a.eps_list, "--eps-schedule");
    const ScalarField rhs = load_rhs(a.rhs, grid, a.p, a.q);
    const ScalarField boundary = load_boundary(a.boundary, grid, a.p, a.q);
    auto [v, rep] = solve_p_poisson(grid, rhs, boundary, cfg);
    write_field_csv(v, a.out);

    if (!a.report.empty()) {
        JsonWriter w;
        w.begin_object();
        w.field("command", "solve");
        w.begin_object("config");
        w.field("p", a.p);
        w.field("domain", a.domain);
        w.field("spacing", a.spacing);
        w.field("origin", a.origin);
        w.field("rhs", a.rhs);
        w.field("boundary", a.boundary);
        w.field("picard_tol", cfg.picard_tol);
        w.field("grad_tol", cfg.grad_tol);
        w.field("linear_tol", cfg.linear_tol);
        w.field("max_outer", cfg.max_outer);
        w.field("max_linear_iters", cfg.max_linear_iters);
        w.field("damping", cfg.damping);
        w.field("out", a.out);
        w.end_object();
        w.begin_object("results");
        w.field("iterations", rep.iterations);
        w.field("final_energy", rep.final_energy);
        w.field("final_residual", rep.final_residual);
        w.field("converged", rep.converged);
        w.field("eps_schedule", rep.eps_schedule);
        w.field("energy_trace", rep.energy_trace);
        w.end_object();
        append_metadata_and_write(w, a.report);
    }
    if (!rep.converged) {
        std::fprintf(stderr, "solve: not converged (residual %.3g, %d iterations)\n",
                     rep.final_residual, rep.iterations);
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------- oracle ----
struct OracleArgs {
    std::string profile = "torsional";
    double p = 2.0, q = std::numeric_limits<double>::infinity();
    std::string domain = "disc:1";
    double spacing = 0.0;
    std::string origin = "0,0";
    std::string center;  // profile center override
    std::string out, report;
};

int run_oracle(const OracleArgs& a) {
    auto grid = make_domain(a.domain, a.spacing, parse_vec2(a.origin, "--origin"));
    const RadialProfile prof = profile_by_label(a.profile, a.p, a.q);
    std::optional<Vec2> center;
    if (!a.center.empty()) center = parse_vec2(a.center, "--center");
    const ScalarField f = render(prof, grid, center);
    write_field_csv(f, a.out);
    if (!a.report.empty()) {
        JsonWriter w;
        w.begin_object();
        w.field("command", "oracle");
        w.begin_object("config");
        w.field("profile", a.profile);
        w.field("p", a.p);
        w.field("q", a.q);
        w.field("domain", a.domain);
        w.field("spacing", a.spacing);
        w.field("origin", a.origin);
        w.field("center", a.center.empty() ? a.origin : a.center);
        w.field("out", a.out);
        w.end_object();
        w.begin_object("results");
        w.field("nodes", static_cast<long long>(grid->size()));
        w.field("interior_nodes", static_cast<long long>(grid->interior_count()));
        w.end_object();
        append_metadata_and_write(w, a.report);
    }
    return 0;
}

// -------------------------------------------------------------- exponent ----
struct ExponentArgs {
    std::string field, center = "0,0", radii = "auto", beta_from, out;
    double margin = 0.01;
};

int run_exponent(const ExponentArgs& a) {
    const ScalarField v = read_field_csv(a.field);
    const Vec2 center = parse_vec2(a.center, "--center");
    std::vector<double> radii;
    if (a.radii == "auto") radii = auto_scan_radii(v.grid(), center);
    else radii = parse_number_list(a.radii, "--radii");
    const ExcessScan scan = excess_scan(v, center, radii);

    double beta = kNaN;
    if (!a.beta_from.empty()) {
        double p = 0.0, q = 0.0;
        char qbuf[32] = {0};
        if (std::sscanf(a.beta_from.c_str(), "p=%lf,q=%31s", &p, qbuf) != 2)
            throw std::invalid_argument("--beta-from: expected p=<real>,q=<real|inf>");
        const std::string qs(qbuf);
        q = (qs == "inf" || qs == "infinity") ? std::numeric_limits<double>::infinity()
                                              : std::stod(qs);
        beta = holder_beta(p, q, a.margin);
    }

    JsonWriter w;
    w.begin_object();
    w.field("command", "exponent");
    w.begin_object("config");
    w.field("field", a.field);
    w.field("center", a.center);
    w.field("radii", a.radii);
    w.field("beta_from", a.beta_from);
    w.field("margin", a.margin);
    w.end_object();
    w.begin_object("results");
    w.field("radii", scan.radii);
    w.field("s_osc", scan.s_osc);
    w.field("s_lin", scan.s_lin);
    w.field("fitted_exponent", scan.fitted_exponent);
    w.field("fit_r2", scan.fit_r2);
    w.field("usable_radii", scan.usable_radii);
    w.field("theoretical_beta", beta);
    w.field("theoretical_beta_minus_1", std::isfinite(beta) ? beta - 1.0 : kNaN);
    w.end_object();
    append_metadata_and_write(w, a.out);

    // gnuplot-ready companion: radius, oscillation excess, linear excess.
    std::ofstream dat(dat_path_for(a.out));
    dat << "# r  s_osc  s_lin\n";
    for (std::size_t k = scan.radii.size(); k-- > 0;)
        dat << format_double(scan.radii[k]) << ' ' << format_double(scan.s_osc[k]) << ' '
            << format_double(scan.s_lin[k]) << '\n';
    return 0;
}

// -------------------------------------------------------------- qr-check ----
struct QrArgs {
    std::string field, mode, out;
    double p = 2.0;
    double exclusion_radius = 0.05;
    double tol_discrete = -1.0;  // default 10*sqrt(spacing)
    std::string radii = "auto";
    double inner_exclusion = 0.0;
    std::string center = "0,0";
    double radius = -1.0;  // default 0.4 * domain radius
    double grad_zero_tol = 1e-3;
    std::size_t pair_budget = 2'000'000;
};

int run_qr(const QrArgs& a) {
    const ScalarField u = read_field_csv(a.field);
    const Grid2D& g = u.grid();
    const Vec2 center = parse_vec2(a.center, "--center");
    const double R = a.radius > 0 ? a.radius : 0.4 * g.domain_radius();

    JsonWriter w;
    w.begin_object();
    w.field("command", "qr-check");
    w.begin_object("config");
    w.field("field", a.field);
    w.field("p", a.p);
    w.field("mode", a.mode);
    w.end_object();
    w.begin_object("results");
    if (a.mode == "dilatation") {
        const double tol = a.tol_discrete > 0 ? a.tol_discrete : 10 * std::sqrt(g.spacing());
        const DilatationReport rep = dilatation_check(u, a.p, a.exclusion_radius, tol);
        w.field("sup_ratio", rep.sup_ratio);
        w.field("violations", rep.violations);
        w.field("admissible", rep.admissible);
        w.field("skipped_small_fz", rep.skipped_small_fz);
        w.field("bound", rep.bound);
        w.field("tol_discrete", rep.tol_discrete);
        w.field("exclusion_radius", a.exclusion_radius);
    } else if (a.mode == "growth") {
        std::vector<double> radii;
        if (a.radii == "auto") {
            const double R0 = g.domain_radius();
            for (int k = 0; k < 5; ++k)
                radii.push_back(0.3 * R0 * std::pow(0.85 / 0.3, k / 4.0));
        } else {
            radii = parse_number_list(a.radii, "--radii");
        }
        const GrowthReport rep = dirichlet_growth(u, a.p, radii, a.inner_exclusion);
        w.field("radii", rep.radii);
        w.field("integrals", rep.integrals);
        w.field("slope", rep.slope);
        w.field("r2", rep.r2);
        w.field("two_alpha", rep.two_alpha);
        w.end_object();
        append_metadata_and_write(w, a.out);
        std::ofstream dat(dat_path_for(a.out));
        dat << "# r  I(r)\n";
        for (std::size_t k = 0; k < rep.radii.size(); ++k)
            dat << format_double(rep.radii[k]) << ' ' << format_double(rep.integrals[k]) << '\n';
        return 0;
    } else if (a.mode == "lemma21" || a.mode == "gradient-holder") {
        const HolderRatioReport rep = gradient_holder_check(u, a.p, center, R, a.pair_budget);
        w.field("ratio", rep.ratio);
        w.field("seminorm", rep.seminorm);
        w.field("sup_norm", rep.sup_norm);
        w.field("alpha", rep.alpha);
        w.field("radius", rep.radius);
        w.field("subsampled", rep.subsampled);
    } else if (a.mode == "lemma23" || a.mode == "small-gradient") {
        const SmallGradientReport rep = small_gradient_check(u, a.p, center, R, a.grad_zero_tol);
        w.field("ratio", rep.ratio);
        w.field("sup_quotient", rep.sup_quotient);
        w.field("sup_norm", rep.sup_norm);
        w.field("radius", rep.radius);
        w.field("nodes", rep.nodes);
    } else {
        throw std::invalid_argument(
            "unknown mode '" + a.mode +
            "' (expected dilatation, growth, lemma21|gradient-holder, lemma23|small-gradient)");
    }
    w.end_object();
    append_metadata_and_write(w, a.out);
    return 0;
}

// ------------------------------------------------------------- conjugate ----
struct ConjArgs {
    std::string field, base, out, report;
    double p = 1.5;
    std::string order = "x-then-y";
};

int run_conjugate(const ConjArgs& a) {
    const ScalarField u = read_field_csv(a.field);
    const Grid2D& g = u.grid();
    int bi, bj;
    if (a.base.empty()) {
        const auto c = g.ij(g.nearest_node(g.origin()));
        bi = c.first;
        bj = c.second;
    } else {
        const auto c = parse_number_list(a.base, "--base");
        if (c.size() != 2) throw std::invalid_argument("--base: expected i,j");
        bi = static_cast<int>(c[0]);
        bj = static_cast<int>(c[1]);
    }
    const PathOrder order =
        a.order == "y-then-x" ? PathOrder::y_then_x : PathOrder::x_then_y;
    const ConjugatePair pair = conjugate_function(u, a.p, bi, bj, order);
    write_field_csv(pair.v, a.out);
    const ConjugateCheck check = verify_conjugate(pair);

    if (!a.report.empty()) {
        JsonWriter w;
        w.begin_object();
        w.field("command", "conjugate");
        w.begin_object("config");
        w.field("field", a.field);
        w.field("p", a.p);
        w.field("base_i", bi);
        w.field("base_j", bj);
        w.field("order", a.order);
        w.field("out", a.out);
        w.end_object();
        w.begin_object("results");
        w.field("p_prime", pair.p_prime);
        w.field("curl_residual", pair.curl_residual);
        w.field("floored_nodes", pair.floored_nodes);
        w.field("unreachable_nodes", pair.unreachable_nodes);
        w.field("norm_identity_error", check.norm_identity_error);
        w.field("dual_residual", check.dual_residual);
        w.end_object();
        append_metadata_and_write(w, a.report);
    }
    return 0;
}

// ------------------------------------------------------------- reproduce ----
struct ReproArgs {
    std::string case_name = "all";
    std::string out;
    double spacing_scale = 1.0;
    bool list = false;
};

int run_reproduce(const ReproArgs& a) {
    if (a.list) {
        for (const auto& n : reproduce::case_names()) std::printf("%s\n", n.c_str());
        return 0;
    }
    const auto results = reproduce::run_cases(a.case_name, a.spacing_scale);
    bool all_pass = true;
    for (const auto& res : results) {
        std::printf("[%s] %s\n", res.name.c_str(), res.pass ? "PASS" : "FAIL");
        for (const auto& c : res.checks)
            std::printf("    %-55s value=%-12.6g requirement %s [%s]\n", c.label.c_str(), c.value,
                        c.requirement.c_str(), c.pass ? "ok" : "FAILED");
        all_pass = all_pass && res.pass;
    }
    if (!a.out.empty()) {
        JsonWriter w;
        w.begin_object();
        w.field("command", "reproduce");
        w.begin_object("config");
        w.field("case", a.case_name);
        w.field("spacing_scale", a.spacing_scale);
        w.end_object();
        w.begin_array("cases");
        for (const auto& res : results) {
            w.begin_object();
            w.field("name", res.name);
            w.field("pass", res.pass);
            w.begin_array("checks");
            for (const auto& c : res.checks) {
                w.begin_object();
                w.field("label", c.label);
                w.field("value", c.value);
                w.field("requirement", c.requirement);
                w.field("pass", c.pass);
                w.end_object();
            }
            w.end_array();
            w.begin_object("metrics");
            for (const auto& m : res.metrics) w.field(m.first.c_str(), m.second);
            w.end_object();
            w.end_object();
        }
        w.end_array();
        append_metadata_and_write(w, a.out);
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pplab: a 2D p-Poisson laboratory"};
    app.require_subcommand(1);
    int exit_code = 0;
    std::function<int()> runner;

    // solve
    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "solve the p-Poisson problem variationally");
    solve->set_config("--config");
    solve->add_option("--p", sa.p, "exponent p > 1")->required();
    solve->add_option("--q", sa.q, "integrability exponent for lq oracles");
    solve->add_option("--domain", sa.domain, "disc:<R> | square:<a> | annulus:<rin>:<rout>")
        ->required();
    solve->add_option("--spacing", sa.spacing, "grid spacing")->required();
    solve->add_option("--origin", sa.origin, "domain center x,y (default 0,0)");
    solve->add_option("--rhs", sa.rhs, "oracle label or field CSV")->required();
    solve->add_option("--boundary", sa.boundary, "oracle label or field CSV")->required();
    solve->add_option("--out", sa.out, "solution CSV path")->required();
    solve->add_option("--report", sa.report, "report JSON path");
    solve->add_option("--eps-schedule", sa.eps_list, "comma list, strictly decreasing");
    solve->add_option("--picard-tol", sa.cfg.picard_tol, "relative energy decrease per phase");
    solve->add_option("--grad-tol", sa.cfg.grad_tol, "residual RMS for convergence");
    solve->add_option("--max-outer", sa.cfg.max_outer, "total Picard iteration cap");
    solve->add_option("--max-linear-iters", sa.cfg.max_linear_iters, "inner CG cap");
    solve->add_option("--linear-tol", sa.cfg.linear_tol, "inner CG relative tolerance");
    solve->add_option("--damping", sa.cfg.damping, "initial Picard step fraction");
    solve->callback([&] { runner = [&] { return run_solve(sa); }; });

    // oracle
    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "render a closed-form radial solution");
    oracle->set_config("--config");
    oracle->add_option("--profile", oa.profile, "torsional | p-harmonic | lq")->required();
    oracle->add_option("--p", oa.p, "exponent p > 1")->required();
    oracle->add_option("--q", oa.q, "q > 2 for the lq profile");
    oracle->add_option("--domain", oa.domain, "default disc:1");
    oracle->add_option("--spacing", oa.spacing, "grid spacing")->required();
    oracle->add_option("--origin", oa.origin, "domain center (default 0,0)");
    oracle->add_option("--center", oa.center, "profile center override x,y");
    oracle->add_option("--out", oa.out, "field CSV path")->required();
    oracle->add_option("--report", oa.report, "report JSON path");
    oracle->callback([&] { runner = [&] { return run_oracle(oa); }; });

    // exponent
    ExponentArgs ea;
    auto* exponent = app.add_subcommand("exponent", "excess scan and log-log exponent fit");
    exponent->set_config("--config");
    exponent->add_option("--field", ea.field, "field CSV")->required();
    exponent->add_option("--center", ea.center, "scan center x,y (default 0,0)");
    exponent->add_option("--radii", ea.radii, "auto or comma list");
    exponent->add_option("--beta-from", ea.beta_from, "p=<real>,q=<real|inf>");
    exponent->add_option("--margin", ea.margin, "epsilon margin for q=inf (default 0.01)");
    exponent->add_option("--out", ea.out, "report JSON path")->required();
    exponent->callback([&] { runner = [&] { return run_exponent(ea); }; });

    // qr-check
    QrArgs qa;
    auto* qr = app.add_subcommand("qr-check", "quasiregularity checks for p-harmonic fields");
    qr->set_config("--config");
    qr->add_option("--field", qa.field, "field CSV")->required();
    qr->add_option("--p", qa.p, "exponent p")->required();
    qr->add_option("--mode", qa.mode,
                   "dilatation | growth | lemma21|gradient-holder | lemma23|small-gradient")
        ->required();
    qr->add_option("--out", qa.out, "report JSON path")->required();
    qr->add_option("--exclusion-radius", qa.exclusion_radius,
                   "standoff from boundary and gradient zeros (dilatation)");
    qr->add_option("--tol-discrete", qa.tol_discrete,
                   "violation tolerance (default 10*sqrt(spacing))");
    qr->add_option("--radii", qa.radii, "growth radii: auto or comma list");
    qr->add_option("--inner-exclusion", qa.inner_exclusion, "growth: skip r below this");
    qr->add_option("--center", qa.center, "ball center (lemma21/lemma23)");
    qr->add_option("--radius", qa.radius, "ball radius R (default 0.4*domain radius)");
    qr->add_option("--grad-zero-tol", qa.grad_zero_tol, "lemma23 center-gradient tolerance");
    qr->add_option("--pair-budget", qa.pair_budget, "seminorm pair budget");
    qr->callback([&] { runner = [&] { return run_qr(qa); }; });

    // conjugate
    ConjArgs ca;
    auto* conj = app.add_subcommand("conjugate", "stream-function transform of a p-harmonic field");
    conj->set_config("--config");
    conj->add_option("--field", ca.field, "field CSV")->required();
    conj->add_option("--p", ca.p, "exponent p > 1")->required();
    conj->add_option("--base", ca.base, "base node i,j (default node nearest the origin)");
    conj->add_option("--order", ca.order, "x-then-y (default) or y-then-x");
    conj->add_option("--out", ca.out, "conjugate field CSV path")->required();
    conj->add_option("--report", ca.report, "report JSON path");
    conj->callback([&] { runner = [&] { return run_conjugate(ca); }; });

    // reproduce
    ReproArgs ra;
    auto* repro = app.add_subcommand("reproduce", "run bundled experiment recipes");
    repro->set_config("--config");
    repro->add_option("--case", ra.case_name, "case name or 'all'");
    repro->add_option("--out", ra.out, "report JSON path");
    repro->add_option("--spacing-scale", ra.spacing_scale,
                      "coarsen grids by this factor (quick runs)");
    repro->add_flag("--list", ra.list, "list case names and exit");
    repro->callback([&] { runner = [&] { return run_reproduce(ra); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        exit_code = runner ? runner() : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return exit_code;
}
