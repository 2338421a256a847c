#ifndef QBM_SMEARING_HPP
#define QBM_SMEARING_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qbm/dispersion.hpp"
#include "qbm/quadrature.hpp"
#include "qbm/sweep.hpp"
#include "qbm/types.hpp"

// Gaussian position smearing of the velocity dispersion: the particle's
// distance fluctuates as x + eps with eps ~ N(0, sigma^2), which averages the
// tau = 2x divergence into a finite well whose depth grows like
// (g^2/4pi m^2) ln(2 sigma^2 / x^2) as sigma -> 0.

namespace qbm {

struct SmearingConfig {
    double sigma;          // Gaussian width of the position fluctuation
    double n_sigma = 8.0;  // integration window half-width, in units of sigma

    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw std::domain_error("SmearingConfig: sigma must be positive");
        // n_sigma >= 5 keeps the e^{-n^2/2} tail truncation below 4e-6.
        if (!(n_sigma > 0.0) || !std::isfinite(n_sigma))
            throw std::domain_error("SmearingConfig: n_sigma must be positive");
    }

    double tail_bound() const { return std::exp(-0.5 * n_sigma * n_sigma); }
};

struct SmearedDispersion {
    double value;
    double quad_error;
    // True when the boundary-contact point eps = -x fell inside the window
    // (sigma approaching x/n_sigma): the result is still finite, but the
    // fixed-distance model is dubious there.
    bool boundary_in_window;
};

// Average of the closed-form velocity dispersion over the Gaussian window
// [-n_sigma*sigma, +n_sigma*sigma]. The integrable log singularities at
// eps = -x (boundary contact) and eps = +/-tau/2 - x (round-trip loci) are
// declared to the quadrature wherever they land inside the window.
// Truncated tail mass is bounded by e^{-n_sigma^2/2}.
inline SmearedDispersion smeared_velocity_dispersion(const ParticleConfig& cfg,
                                                     MeasuringTime t, const SmearingConfig& s,
                                                     const QuadratureSpec& q = {}) {
    cfg.validate();
    t.validate();
    s.validate();
    const double x = cfg.distance;
    const double tau = t.tau;
    const double sigma = s.sigma;
    const double half = s.n_sigma * sigma;
    const bool boundary_inside = x <= half;
    if (cfg.charge == 0.0 || tau == 0.0) return {0.0, 0.0, boundary_inside};

    const double c = cfg.coupling_sq();
    QuadratureSpec spec = q;
    for (double p : {-x, 0.5 * tau - x, -0.5 * tau - x}) spec.singularities.push_back(p);
    auto integrand = [&](double eps) {
        const double u = eps / sigma;
        const double weight = std::exp(-0.5 * u * u) / (std::sqrt(2.0 * pi) * sigma);
        return weight * detail::velocity_dispersion_raw(c, x + eps, tau);
    };
    const QuadResult r = adaptive_quad(integrand, -half, half, spec);
    if (!r.converged)
        throw QuadratureError("smeared_velocity_dispersion: quadrature did not converge",
                              r.value, r.error);
    return {r.value, r.error, boundary_inside};
}

// Depth of the smeared well at tau = 2x in the sigma -> 0 regime:
// (g^2/4pi m^2) ln(2 sigma^2/x^2). Successive sigma-halvings deepen it by
// (g^2/4pi m^2) ln(1/4) independent of x.
inline double smeared_well_depth_asymptote(const ParticleConfig& cfg, const SmearingConfig& s) {
    cfg.validate();
    s.validate();
    const double r = s.sigma / cfg.distance;
    return cfg.coupling_sq() / (4.0 * pi) * std::log(2.0 * r * r);
}

struct SmearedCurveRow {
    double tau_over_x;
    double value;  // NaN when ok == false
    double quad_error;
    bool ok;
    bool boundary_in_window;
};

// Smeared dispersion over a tau/x grid; rows are computed concurrently and
// returned in grid order. Per-point quadrature failures are flagged in the
// row instead of aborting the sweep.
inline std::vector<SmearedCurveRow> smeared_curve(const ParticleConfig& cfg,
                                                  const SmearingConfig& s, const SweepGrid& grid,
                                                  const QuadratureSpec& q = {}) {
    cfg.validate();
    s.validate();
    grid.validate();
    if (!(grid.start > 0.0))
        throw std::domain_error("smeared_curve: grid must have strictly positive tau/x");
    const std::vector<double> pts = grid.points();
    std::vector<SmearedCurveRow> rows(pts.size());
    parallel_for_index(pts.size(), [&](std::size_t i) {
        SmearedCurveRow row{pts[i], std::numeric_limits<double>::quiet_NaN(), 0.0, false,
                            false};
        try {
            const SmearedDispersion d =
                smeared_velocity_dispersion(cfg, {pts[i] * cfg.distance}, s, q);
            row.value = d.value;
            row.quad_error = d.quad_error;
            row.ok = true;
            row.boundary_in_window = d.boundary_in_window;
        } catch (const QuadratureError& e) {
            row.value = std::numeric_limits<double>::quiet_NaN();
            row.quad_error = e.achieved_error();
        }
        rows[i] = row;
    });
    return rows;
}

}  // namespace qbm

#endif  // QBM_SMEARING_HPP
