#ifndef QBM_DISPERSION_HPP
#define QBM_DISPERSION_HPP

#include <cmath>
#include <limits>

#include "qbm/types.hpp"

// Closed-form dispersions of a scalar test particle held at distance x from
// a point-like Dirichlet boundary in 1+1 dimensions, after subtracting the
// boundary-free Minkowski vacuum:
//
//   (dv)^2 = -(g^2 / 4 pi m^2) ln[(4x^2 / (tau^2 - 4x^2))^2]
//   (dx)^2 = (g^2 / 8 pi m^2) [(tau^2 - 4x^2) ln(((tau^2 - 4x^2) / 4x^2)^2) - 2 tau^2]
//
// The velocity dispersion diverges on the round-trip locus tau = 2x and is
// negative (subvacuum) on 0 < tau < 2*sqrt(2)*x away from the locus. The
// position dispersion is regular for every tau when x > 0; its tau = 2x
// point is a removable 0*ln(0) limit.

namespace qbm {
namespace detail {

// ln of the squared ratio expanded as a difference of logs: no overflow when
// tau^2 approaches 4p^2, and even in p so the Gaussian smearing integral can
// sample the formula across p <= 0. Returns -inf on the singular loci.
inline double velocity_dispersion_raw(double coupling_sq, double position, double tau) {
    const double four_p_sq = 4.0 * position * position;
    const double lightcone = std::abs(tau * tau - four_p_sq);
    // + 0.0 folds the negative zero produced at tau = 0 into plain zero
    return -(coupling_sq / (2.0 * pi)) * (std::log(four_p_sq) - std::log(lightcone)) + 0.0;
}

}  // namespace detail

inline DispersionValue velocity_dispersion(const ParticleConfig& cfg, MeasuringTime t) {
    cfg.validate();
    t.validate();
    if (cfg.charge == 0.0) return {DispersionKind::VelocitySquared, 0.0, true};
    if (at_round_trip_time(cfg.distance, t.tau))
        return {DispersionKind::VelocitySquared, -std::numeric_limits<double>::infinity(),
                false};
    return {DispersionKind::VelocitySquared,
            detail::velocity_dispersion_raw(cfg.coupling_sq(), cfg.distance, t.tau), true};
}

inline DispersionValue position_dispersion(const ParticleConfig& cfg, MeasuringTime t) {
    cfg.validate();
    t.validate();
    const double x = cfg.distance;
    const double tau = t.tau;
    const double c = cfg.coupling_sq();
    if (at_round_trip_time(x, tau))  // analytic limit of the 0*ln(0) point
        return {DispersionKind::PositionSquared, -(c / pi) * x * x, true};
    const double d = tau * tau - 4.0 * x * x;
    const double value =
        (c / (8.0 * pi)) * (d * 2.0 * std::log(std::abs(d) / (4.0 * x * x)) - 2.0 * tau * tau) +
        0.0;  // folds the negative zero at tau = 0 into plain zero
    return {DispersionKind::PositionSquared, value, true};
}

// Measuring times with subvacuum behavior: the velocity dispersion is
// negative exactly on this open interval minus the singular point tau = 2x.
inline TauInterval subvacuum_window(const ParticleConfig& cfg) {
    cfg.validate();
    return {0.0, 2.0 * std::sqrt(2.0) * cfg.distance};
}

// |(dx)^2| / x^2, the fixed-position consistency check; the model is trusted
// only while this stays well below one.
inline double validity_metric(const ParticleConfig& cfg, MeasuringTime t) {
    const DispersionValue dx2 = position_dispersion(cfg, t);
    return std::abs(dx2.value) / (cfg.distance * cfg.distance);
}

// g^2 / (pi m^2), the tau-independent constraint that must be small for the
// dispersions to be meaningful at any measuring time.
inline double coupling_constraint(const ParticleConfig& cfg) {
    cfg.validate();
    return cfg.coupling_sq() / pi;
}

}  // namespace qbm

#endif  // QBM_DISPERSION_HPP
