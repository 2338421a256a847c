// qbm: dispersions of a charged test particle coupled to a massless scalar
// field near a perfectly reflecting point boundary, plus the electromagnetic
// plane-boundary comparison. Subcommands: eval, figure, verify, compare-em.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 singular-point request without --allow-singular.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbm/dispersion.hpp"
#include "qbm/em_comparison.hpp"
#include "qbm/figures.hpp"
#include "qbm/report.hpp"
#include "qbm/smearing.hpp"
#include "qbm/sweep.hpp"
#include "qbm/types.hpp"
#include "qbm/verify.hpp"

namespace {

using nlohmann::json;

struct GridFlags {
    double start = 0.05;
    double stop = 4.0;
    int count = 80;
    std::string scale = "linear";

    qbm::SweepGrid to_grid(qbm::SweepVariable var) const {
        return {var, start, stop, count,
                scale == "log" ? qbm::SweepScale::Log : qbm::SweepScale::Linear};
    }
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
    cmd->add_option("--grid-start", g.start, "First tau/x value")->capture_default_str();
    cmd->add_option("--grid-stop", g.stop, "Last tau/x value")->capture_default_str();
    cmd->add_option("--grid-count", g.count, "Number of grid points")->capture_default_str();
    cmd->add_option("--grid-scale", g.scale, "Grid spacing")
        ->transform(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
}

int write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << out_path << "'\n";
        return 2;
    }
    out << text;
    return 0;
}

json dispersion_to_json(const qbm::DispersionValue& v, const char* source) {
    json j{{"regular", v.regular}, {"source", source}};
    if (v.regular)
        j["value"] = v.value;
    else
        j["value"] = nullptr;
    return j;
}

int run_eval(double g, double m, double x, double tau_value, double sigma, bool has_sigma,
             bool allow_singular, double tol, const std::string& format) {
    const qbm::ParticleConfig cfg{g, m, x};
    cfg.validate();
    const qbm::MeasuringTime tau{tau_value};
    tau.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const qbm::DispersionValue vel = qbm::velocity_dispersion(cfg, tau);
    const qbm::DispersionValue pos = qbm::position_dispersion(cfg, tau);
    const double validity = qbm::validity_metric(cfg, tau);
    const qbm::TauInterval window = qbm::subvacuum_window(cfg);

    const char* classification = !vel.regular  ? "singular"
                                 : vel.value < 0 ? "subvacuum"
                                 : vel.value > 0 ? "above_vacuum"
                                                 : "boundary";

    bool boundary_warn = false;
    double smeared_value = 0.0, smeared_err = 0.0;
    if (has_sigma) {
        const qbm::SmearingConfig s{sigma};
        qbm::QuadratureSpec q;
        q.abs_tol = q.rel_tol = tol;
        const qbm::SmearedDispersion sd = qbm::smeared_velocity_dispersion(cfg, tau, s, q);
        smeared_value = sd.value;
        smeared_err = sd.quad_error;
        boundary_warn = sd.boundary_in_window;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (format == "json") {
        qbm::RunReport rep;
        rep.command = "eval";
        rep.params = {{"g", g}, {"m", m}, {"x", x}, {"tau", tau_value}};
        if (has_sigma) rep.params["sigma"] = sigma;
        rep.results = {{"velocity_dispersion", dispersion_to_json(vel, "closed-form")},
                       {"position_dispersion", dispersion_to_json(pos, "closed-form")},
                       {"validity_metric", validity},
                       {"coupling_constraint", qbm::coupling_constraint(cfg)},
                       {"subvacuum_window", {{"lower", window.lower}, {"upper", window.upper}}},
                       {"classification", classification}};
        if (has_sigma)
            rep.results["smeared_velocity_dispersion"] = {{"value", smeared_value},
                                                          {"quad_error", smeared_err},
                                                          {"boundary_in_window", boundary_warn},
                                                          {"source", "smeared"}};
        rep.duration_seconds = seconds;
        std::cout << rep.to_json().dump(2) << "\n";
    } else {
        std::printf("velocity dispersion    %s\n",
                    vel.regular ? qbm::format_double(vel.value).c_str()
                                : "singular (round-trip time tau = 2x)");
        std::printf("position dispersion    %s\n", qbm::format_double(pos.value).c_str());
        std::printf("validity |dx^2|/x^2    %s\n", qbm::format_double(validity).c_str());
        std::printf("coupling bound g^2/pi m^2  %s\n",
                    qbm::format_double(qbm::coupling_constraint(cfg)).c_str());
        std::printf("subvacuum window       (0, %s)   classification: %s\n",
                    qbm::format_double(window.upper).c_str(), classification);
        if (has_sigma) {
            std::printf("smeared dispersion     %s   (sigma=%s, quad err %.1e)\n",
                        qbm::format_double(smeared_value).c_str(),
                        qbm::format_double(sigma).c_str(), smeared_err);
            if (boundary_warn)
                std::printf("warning: boundary-contact point inside smearing window "
                            "(sigma not small against x)\n");
        }
    }

    if (!vel.regular && !allow_singular) {
        std::cerr << "error: tau = 2x is the round-trip singular point; "
                     "pass --allow-singular to report it anyway\n";
        return 3;
    }
    return 0;
}

int run_figure(const std::string& name, double g, double m, double x,
               std::vector<double> sigmas, const GridFlags& gf, double tol,
               const std::string& format, const std::string& out_path) {
    const qbm::ParticleConfig cfg{g, m, x};
    cfg.validate();
    const qbm::SweepGrid grid = gf.to_grid(qbm::SweepVariable::TauOverX);
    grid.validate();

    qbm::CsvTable table;
    if (name == "fig1") {
        table = qbm::fig1_table(cfg, grid);
    } else if (name == "fig2") {
        table = qbm::fig2_table(cfg, grid);
    } else {
        if (sigmas.empty())
            throw CLI::ValidationError("figure", "fig3 requires at least one --sigma value");
        qbm::QuadratureSpec q;
        q.abs_tol = q.rel_tol = tol;
        table = qbm::fig3_table(cfg, sigmas, grid, q);
    }

    if (format == "json") {
        qbm::RunReport rep;
        rep.command = "figure " + name;
        rep.params = {{"g", g},
                      {"m", m},
                      {"x", x},
                      {"grid", {{"start", gf.start}, {"stop", gf.stop}, {"count", gf.count},
                                {"scale", gf.scale}}}};
        if (name == "fig3") rep.params["sigma_over_x"] = sigmas;
        rep.results = {{"header", table.header},
                       {"rows", table.rows},
                       {"source", name == "fig3" ? "smeared" : "closed-form"}};
        return write_output(rep.to_json(/*include_duration=*/false).dump(2) + "\n", out_path);
    }
    return write_output(table.str(), out_path);
}

int run_compare_em(double e, double m, double x, const GridFlags& gf, const std::string& format,
                   const std::string& out_path) {
    const qbm::EmParticleConfig cfg{e, m, x};
    cfg.validate();
    const qbm::SweepGrid grid = gf.to_grid(qbm::SweepVariable::TauOverX);
    const qbm::CsvTable table = qbm::compare_em_table(cfg, grid);
    if (format == "json") {
        qbm::RunReport rep;
        rep.command = "compare-em";
        rep.params = {{"e", e},
                      {"m", m},
                      {"x", x},
                      {"grid", {{"start", gf.start}, {"stop", gf.stop}, {"count", gf.count},
                                {"scale", gf.scale}}}};
        rep.results = {{"header", table.header},
                       {"rows", table.rows},
                       {"source", "closed-form"}};
        return write_output(rep.to_json(/*include_duration=*/false).dump(2) + "\n", out_path);
    }
    return write_output(table.str(), out_path);
}

int run_verify(bool fast, double perturb, const std::vector<double>& grid,
               const std::string& format) {
    qbm::VerifyOptions opt;
    opt.fast = fast;
    opt.closed_form_scale = perturb;
    opt.tau_grid = grid;

    const auto t0 = std::chrono::steady_clock::now();
    const qbm::VerifyReport report = qbm::run_verification(opt);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (format == "json") {
        qbm::RunReport rep;
        rep.command = "verify";
        rep.params = {{"fast", fast}};
        json checks = json::array();
        for (const auto& c : report.checks)
            checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        rep.results = {{"checks", checks}, {"source", "oracle"}};
        rep.duration_seconds = seconds;
        rep.pass = report.all_pass();
        std::cout << rep.to_json().dump(2) << "\n";
    } else {
        for (const auto& c : report.checks)
            std::printf("[%s] %-24s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                        c.detail.c_str());
        std::printf("%s (%zu checks, %.1f s)\n",
                    report.all_pass() ? "all checks passed" : "VERIFICATION FAILED",
                    report.checks.size(), seconds);
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Velocity and position dispersions of a test particle in the vacuum of a "
                 "massless scalar field near a reflecting point boundary"};
    app.require_subcommand(1);
    // usage: qbm --config file.ini <subcommand>; keys live in a [subcommand] section
    app.set_config("--config", "", "Read option defaults from an INI file");

    double g = 1.0, m = 1.0, x = 1.0, sigma = 0.0, e = 1.0;
    double tau = std::numeric_limits<double>::quiet_NaN();  // must come from flag or config
    double tol = 1e-9, perturb = 1.0;
    bool allow_singular = false, fast = false;
    std::string format_eval = "text", format_table = "csv", out_path, fig_name;
    std::vector<double> sigmas, verify_grid;
    GridFlags grid_flags;

    CLI::App* eval = app.add_subcommand("eval", "Evaluate the dispersions at one point");
    eval->configurable();
    eval->add_option("--g", g, "Coupling constant")->capture_default_str();
    eval->add_option("--m", m, "Particle mass")->capture_default_str();
    eval->add_option("--x", x, "Distance to the boundary")->capture_default_str();
    // not required() so a config file can supply it; checked after parse
    eval->add_option("--tau", tau, "Measuring time");
    CLI::Option* sigma_opt =
        eval->add_option("--sigma", sigma, "Gaussian position-smearing width");
    eval->add_option("--tol", tol, "Quadrature tolerance for the smeared value")
        ->capture_default_str();
    eval->add_flag("--allow-singular", allow_singular,
                   "Report the tau = 2x point instead of failing with exit code 3");
    eval->add_option("--format", format_eval, "Output format")
        ->transform(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    CLI::App* figure = app.add_subcommand("figure", "Emit curve data over tau/x");
    figure->configurable();
    figure->add_option("name", fig_name, "Which curve: fig1 (velocity), fig2 (position/x^2), "
                                         "fig3 (smeared velocity)")
        ->required()
        ->transform(CLI::IsMember({"fig1", "fig2", "fig3"}));
    figure->add_option("--g", g, "Coupling constant")->capture_default_str();
    figure->add_option("--m", m, "Particle mass")->capture_default_str();
    figure->add_option("--x", x, "Distance to the boundary")->capture_default_str();
    figure->add_option("--sigma", sigmas, "Smearing widths sigma/x (fig3 only, repeatable)");
    figure->add_option("--tol", tol, "Quadrature tolerance (fig3)")->capture_default_str();
    add_grid_flags(figure, grid_flags);
    figure->add_option("--format", format_table, "Output format")
        ->transform(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    figure->add_option("--out", out_path, "Write to file instead of stdout");

    CLI::App* verify = app.add_subcommand("verify", "Run the self-verification suite");
    verify->configurable();
    verify->add_flag("--fast", fast, "Reduced grids, a few seconds");
    verify->add_option("--grid", verify_grid, "Override of the tau/x oracle grid");
    verify->add_option("--format", format_eval, "Output format")
        ->transform(CLI::IsMember({"text", "json"}));
    verify->add_option("--perturb-closed-form", perturb,
                       "Fault-injection hook: scale the closed-form velocity dispersion")
        ->group("");  // hidden; exists for the canary test

    CLI::App* compare = app.add_subcommand("compare-em",
                                           "Scalar vs electromagnetic dispersions over tau/x");
    compare->configurable();
    compare->add_option("--e", e, "Electric charge")->capture_default_str();
    compare->add_option("--m", m, "Particle mass")->capture_default_str();
    compare->add_option("--x", x, "Distance to the boundary")->capture_default_str();
    add_grid_flags(compare, grid_flags);
    compare->add_option("--format", format_table, "Output format")
        ->transform(CLI::IsMember({"csv", "json"}));
    compare->add_option("--out", out_path, "Write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;  // help/version exit cleanly; usage errors are 2
    }

    try {
        if (eval->parsed()) {
            if (std::isnan(tau)) {
                std::cerr << "error: --tau is required (flag or config file)\n";
                return 2;
            }
            return run_eval(g, m, x, tau, sigma, sigma_opt->count() > 0, allow_singular, tol,
                            format_eval);
        }
        if (figure->parsed())
            return run_figure(fig_name, g, m, x, sigmas, grid_flags, tol, format_table,
                              out_path);
        if (verify->parsed()) return run_verify(fast, perturb, verify_grid, format_eval);
        if (compare->parsed()) return run_compare_em(e, m, x, grid_flags, format_table, out_path);
    } catch (const CLI::ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}
