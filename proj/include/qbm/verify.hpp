#ifndef QBM_VERIFY_HPP
#define QBM_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qbm/dispersion.hpp"
#include "qbm/field_oracle.hpp"
#include "qbm/quadrature.hpp"
#include "qbm/smearing.hpp"
#include "qbm/special_functions.hpp"
#include "qbm/sweep.hpp"
#include "qbm/types.hpp"

// Self-verification suite: closed-form anchors, oracle-vs-closed-form grids,
// finite-difference order checks, quadrature and series self-tests, and the
// smearing asymptote chain. Every check is a pure computation returning
// pass/fail plus a one-line diagnostic.

namespace qbm {

struct VerifyOptions {
    bool fast = false;           // reduced grids, target a few seconds
    double closed_form_scale = 1.0;     // fault-injection hook: scales the closed-form
                                 // velocity dispersion inside the comparisons
    std::vector<double> tau_grid;  // tau/x override; empty -> default grid
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.pass; });
    }
};

namespace detail {

inline std::string format_sci(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

inline double rel_dev(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

}  // namespace detail

// Exact anchors of the closed forms: the round-trip position value and the
// two quoted validity figures.
inline CheckResult check_closed_form_anchors() {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const double anchor = position_dispersion(cfg, {2.0}).value;
    const double anchor_dev = detail::rel_dev(anchor, -1.0 / pi);

    const double v1 = validity_metric(ParticleConfig{0.1, 1.0, 1.0}, {10.0});
    const double v2 = validity_metric(ParticleConfig{0.01, 1.0, 1.0}, {50.0});
    const double dev1 = detail::rel_dev(v1, 0.16);
    const double dev2 = detail::rel_dev(v2, 0.11);

    const bool pass = anchor_dev <= 1e-12 && dev1 <= 0.05 && dev2 <= 0.05;
    return {"closed-form anchors",
            pass,
            "round-trip dev " + detail::format_sci(anchor_dev) + ", validity devs " +
                detail::format_sci(dev1) + " / " + detail::format_sci(dev2)};
}

// Velocity oracle vs the closed form over the tau/x grid, 1e-3 relative.
inline CheckResult check_velocity_oracle_grid(const VerifyOptions& opt) {
    std::vector<double> grid = opt.tau_grid;
    if (grid.empty())
        grid = opt.fast ? std::vector<double>{0.5, 1.0, 3.0}
                        : std::vector<double>{0.25, 0.5, 1.0, 1.5, 2.5, 3.0, 4.0};
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const FiniteDifferenceSpec fd = default_fd_spec(cfg.distance);

    std::vector<double> devs(grid.size());
    parallel_for_index(grid.size(), [&](std::size_t i) {
        const MeasuringTime tau{grid[i] * cfg.distance};
        const double oracle = velocity_dispersion_oracle(cfg, tau, fd).value;
        const double closed = opt.closed_form_scale * velocity_dispersion(cfg, tau).value;
        devs[i] = detail::rel_dev(oracle, closed);
    });
    const double worst = *std::max_element(devs.begin(), devs.end());
    return {"velocity oracle grid", worst < 1e-3,
            "worst rel dev " + detail::format_sci(worst) + " over " +
                std::to_string(grid.size()) + " points (tol 1e-3)"};
}

// Position oracle vs the closed form, 1e-2 relative.
inline CheckResult check_position_oracle_grid(const VerifyOptions& opt) {
    std::vector<double> grid = opt.tau_grid;
    if (grid.empty())
        grid = opt.fast ? std::vector<double>{0.5, 1.0}
                        : std::vector<double>{0.25, 0.5, 1.0, 1.5, 2.5, 3.0, 4.0};
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const FiniteDifferenceSpec fd = default_fd_spec(cfg.distance);

    std::vector<double> devs(grid.size());
    parallel_for_index(grid.size(), [&](std::size_t i) {
        const MeasuringTime tau{grid[i] * cfg.distance};
        const double oracle = position_dispersion_oracle(cfg, tau, fd).value;
        const double closed = position_dispersion(cfg, tau).value;
        devs[i] = detail::rel_dev(oracle, closed);
    });
    const double worst = *std::max_element(devs.begin(), devs.end());
    return {"position oracle grid", worst < 1e-2,
            "worst rel dev " + detail::format_sci(worst) + " over " +
                std::to_string(grid.size()) + " points (tol 1e-2)"};
}

// Halving the step must shrink the finite-difference error by about the
// second-order factor 4.
inline CheckResult check_richardson(const VerifyOptions& opt) {
    const std::vector<double> grid =
        opt.fast ? std::vector<double>{1.0} : std::vector<double>{1.0, 3.0};
    const ParticleConfig cfg{1.0, 1.0, 1.0};

    bool pass = true;
    std::string detail_text;
    for (double r : grid) {
        const MeasuringTime tau{r * cfg.distance};
        const double closed = opt.closed_form_scale * velocity_dispersion(cfg, tau).value;
        const double err_2h =
            std::abs(velocity_dispersion_oracle(cfg, tau, {2e-3}).value - closed);
        const double err_h =
            std::abs(velocity_dispersion_oracle(cfg, tau, {1e-3}).value - closed);
        const double ratio = err_2h / err_h;
        pass = pass && ratio > 2.5 && ratio < 6.0;
        if (!detail_text.empty()) detail_text += ", ";
        detail_text += "tau/x=" + detail::format_sci(r) + " ratio " + detail::format_sci(ratio);
    }
    return {"finite-difference order", pass, detail_text + " (want ~4)"};
}

// The three reference integrals must land inside their reported error bounds.
inline CheckResult check_quadrature() {
    struct Case {
        const char* name;
        double exact;
        double value;
        double err;
    };
    QuadratureSpec at_zero;
    at_zero.singularities = {0.0};
    QuadratureSpec at_third;
    at_third.singularities = {1.0 / 3.0};

    const QuadResult poly = adaptive_quad([](double u) { return u; }, 0.0, 1.0);
    const QuadResult logq =
        adaptive_quad([](double u) { return std::log(1.0 / u); }, 0.0, 1.0, at_zero);
    const QuadResult interior = adaptive_quad(
        [](double u) { return std::log(std::abs(u - 1.0 / 3.0)); }, 0.0, 1.0, at_third);

    // Interior reference: -1 + (1/3)ln(1/3) + (2/3)ln(2/3).
    const Case cases[] = {
        {"poly", 0.5, poly.value, poly.error},
        {"log-endpoint", 1.0, logq.value, logq.error},
        {"log-interior", -1.6365141682948128185, interior.value, interior.error},
    };
    bool pass = poly.converged && logq.converged && interior.converged;
    std::string detail_text;
    for (const Case& c : cases) {
        const double err = std::abs(c.value - c.exact);
        pass = pass && err <= std::max(c.err, 1e-14);
        if (!detail_text.empty()) detail_text += ", ";
        detail_text += std::string(c.name) + " err " + detail::format_sci(err);
    }
    return {"quadrature self-test", pass, detail_text};
}

// Series evaluation: exact origin value, the frozen z=1 regression constant,
// and the z/3 leading coefficient.
inline CheckResult check_hypergeometric() {
    const SeriesResult at_zero = hyp2f2_1_1_3h2(0.0, 1e-15);
    const SeriesResult at_one = hyp2f2_1_1_3h2(1.0, 1e-15);
    const double z = 1e-6;
    const SeriesResult small = hyp2f2_1_1_3h2(z, 1e-15);

    const double regression = 1.4452456133883472289;  // frozen high-precision series value
    const bool pass = at_zero.value == 1.0 && at_zero.converged && at_one.converged &&
                      detail::rel_dev(at_one.value, regression) <= 1e-12 &&
                      small.converged &&
                      // next series term is 2 z^2 / 22.5 ~ 9e-14 at z = 1e-6
                      std::abs(small.value - 1.0 - z / 3.0) <= 1e-12;
    return {"hypergeometric series", pass,
            "z=1 dev " + detail::format_sci(detail::rel_dev(at_one.value, regression)) +
                " (tol 1e-12)"};
}

// Smearing vs the sigma->0 depth asymptote: deviation shrinks monotonically
// and successive sigma-halvings deepen the well by ln(1/4)/(4 pi) per unit
// coupling.
inline CheckResult check_smearing_asymptote() {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const MeasuringTime round_trip{2.0 * cfg.distance};
    const double sigmas[] = {0.05, 0.02, 0.01};

    double devs[3];
    double values[3];
    for (int i = 0; i < 3; ++i) {
        const SmearingConfig s{sigmas[i]};
        values[i] = smeared_velocity_dispersion(cfg, round_trip, s).value;
        devs[i] = detail::rel_dev(values[i], smeared_well_depth_asymptote(cfg, s));
    }
    const bool monotone = devs[0] > devs[1] && devs[1] > devs[2];

    const double halving = smeared_velocity_dispersion(cfg, round_trip, {0.01}).value -
                           smeared_velocity_dispersion(cfg, round_trip, {0.02}).value;
    const double law = cfg.coupling_sq() / (4.0 * pi) * std::log(0.25);
    const double law_dev = detail::rel_dev(halving, law);

    const bool pass = monotone && law_dev <= 0.10;
    return {"smearing asymptote", pass,
            "devs " + detail::format_sci(devs[0]) + " > " + detail::format_sci(devs[1]) +
                " > " + detail::format_sci(devs[2]) + ", halving-law dev " +
                detail::format_sci(law_dev) + " (tol 0.1)"};
}

inline VerifyReport run_verification(const VerifyOptions& opt = {}) {
    VerifyReport report;
    report.checks.push_back(check_closed_form_anchors());
    report.checks.push_back(check_velocity_oracle_grid(opt));
    report.checks.push_back(check_position_oracle_grid(opt));
    report.checks.push_back(check_richardson(opt));
    report.checks.push_back(check_quadrature());
    report.checks.push_back(check_hypergeometric());
    report.checks.push_back(check_smearing_asymptote());
    return report;
}

}  // namespace qbm

#endif  // QBM_VERIFY_HPP
