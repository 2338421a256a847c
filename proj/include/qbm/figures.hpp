#ifndef QBM_FIGURES_HPP
#define QBM_FIGURES_HPP

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>
#include <vector>

#include "qbm/dispersion.hpp"
#include "qbm/em_comparison.hpp"
#include "qbm/smearing.hpp"
#include "qbm/sweep.hpp"
#include "qbm/types.hpp"

// Figure-data emission: dimensionless curves over tau/x, deterministic CSV.
// Values carry their natural g^2/m^2 (or e^2/m^2) scale; with unit parameters
// the columns are exactly the published curves. Singular or failed points are
// emitted as empty cells so plotting tools render gaps.

namespace qbm {

// Shortest round-trip decimal form: locale-independent and byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

struct CsvTable {
    std::string header;
    std::vector<std::string> rows;

    std::string str() const {
        std::string out = header;
        out.push_back('\n');
        for (const auto& r : rows) {
            out += r;
            out.push_back('\n');
        }
        return out;
    }
};

// Velocity dispersion curve over tau/x.
inline CsvTable fig1_table(const ParticleConfig& cfg, const SweepGrid& grid) {
    cfg.validate();
    const std::vector<double> pts = grid.points();
    CsvTable t{"tau_over_x,value", {}};
    t.rows.reserve(pts.size());
    for (double r : pts) {
        const DispersionValue v = velocity_dispersion(cfg, {r * cfg.distance});
        t.rows.push_back(format_double(r) + "," +
                         (v.regular ? format_double(v.value) : std::string{}));
    }
    return t;
}

// Relative position dispersion (dx)^2/x^2 over tau/x; finite everywhere,
// including the round-trip point.
inline CsvTable fig2_table(const ParticleConfig& cfg, const SweepGrid& grid) {
    cfg.validate();
    const double x2 = cfg.distance * cfg.distance;
    const std::vector<double> pts = grid.points();
    CsvTable t{"tau_over_x,value", {}};
    t.rows.reserve(pts.size());
    for (double r : pts) {
        const DispersionValue v = position_dispersion(cfg, {r * cfg.distance});
        t.rows.push_back(format_double(r) + "," +
                         (v.regular ? format_double(v.value / x2) : std::string{}));
    }
    return t;
}

// Smeared velocity dispersion, one block per sigma/x value.
inline CsvTable fig3_table(const ParticleConfig& cfg, const std::vector<double>& sigmas_over_x,
                           const SweepGrid& grid, const QuadratureSpec& q = {}) {
    cfg.validate();
    CsvTable t{"tau_over_x,value,sigma_over_x", {}};
    for (double so : sigmas_over_x) {
        const SmearingConfig s{so * cfg.distance};
        const std::string sigma_text = format_double(so);
        for (const SmearedCurveRow& row : smeared_curve(cfg, s, grid, q)) {
            t.rows.push_back(format_double(row.tau_over_x) + "," +
                             (row.ok ? format_double(row.value) : std::string{}) + "," +
                             sigma_text);
        }
    }
    return t;
}

// Scalar-model and electromagnetic dispersions side by side. The scalar
// column reuses the EM charge as its coupling so the rows share parameters.
inline CsvTable compare_em_table(const EmParticleConfig& cfg, const SweepGrid& grid) {
    cfg.validate();
    const ParticleConfig scalar{cfg.charge, cfg.mass, cfg.distance};
    const std::vector<double> pts = grid.points();
    CsvTable t{"tau_over_x,scalar,em_perp,em_parallel", {}};
    t.rows.reserve(pts.size());
    for (double r : pts) {
        const MeasuringTime tau{r * cfg.distance};
        const DispersionValue s = velocity_dispersion(scalar, tau);
        const DispersionValue vp = em_velocity_dispersion_perp(cfg, tau);
        const DispersionValue vl = em_velocity_dispersion_parallel(cfg, tau);
        t.rows.push_back(format_double(r) + "," +
                         (s.regular ? format_double(s.value) : std::string{}) + "," +
                         (vp.regular ? format_double(vp.value) : std::string{}) + "," +
                         (vl.regular ? format_double(vl.value) : std::string{}));
    }
    return t;
}

}  // namespace qbm

#endif  // QBM_FIGURES_HPP
