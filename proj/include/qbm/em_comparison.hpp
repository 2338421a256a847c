#ifndef QBM_EM_COMPARISON_HPP
#define QBM_EM_COMPARISON_HPP

#include <cmath>
#include <limits>

#include "qbm/types.hpp"

// Velocity dispersions of an electric charge near a perfectly reflecting
// plane, quoted for qualitative comparison with the scalar model:
//
//   (dv_perp)^2 = (e^2 / pi^2 m^2) (tau / 32 x^3) ln[((2x+tau)/(2x-tau))^2]
//   (dv_par)^2  = (e^2 / pi^2 m^2) [(tau / 64 x^3) ln[((2x+tau)/(2x-tau))^2]
//                                    - tau^2 / (8 x^2 (tau^2 - 4 x^2))]
//
// Both parallel components share the second expression. Both diverge on the
// round-trip locus tau = 2x; the parallel one changes divergence sign across
// it (pole term), so its sentinel is NaN rather than a signed infinity.

namespace qbm {
namespace detail {

// ln[((2x+tau)/(2x-tau))^2] as 2 ln|ratio|: the squared argument would
// overflow for |tau - 2x| around 1e-12 while the log form stays accurate.
inline double em_log_sq_ratio(double x, double tau) {
    return 2.0 * std::log(std::abs((2.0 * x + tau) / (2.0 * x - tau)));
}

}  // namespace detail

inline DispersionValue em_velocity_dispersion_perp(const EmParticleConfig& cfg,
                                                   MeasuringTime t) {
    cfg.validate();
    t.validate();
    if (cfg.charge == 0.0) return {DispersionKind::VelocitySquared, 0.0, true};
    const double x = cfg.distance;
    if (at_round_trip_time(x, t.tau))
        return {DispersionKind::VelocitySquared, std::numeric_limits<double>::infinity(),
                false};
    const double value = cfg.coupling_sq() / (pi * pi) * (t.tau / (32.0 * x * x * x)) *
                         detail::em_log_sq_ratio(x, t.tau);
    return {DispersionKind::VelocitySquared, value, true};
}

inline DispersionValue em_velocity_dispersion_parallel(const EmParticleConfig& cfg,
                                                       MeasuringTime t) {
    cfg.validate();
    t.validate();
    if (cfg.charge == 0.0) return {DispersionKind::VelocitySquared, 0.0, true};
    const double x = cfg.distance;
    const double tau = t.tau;
    if (at_round_trip_time(x, tau))
        return {DispersionKind::VelocitySquared,
                std::numeric_limits<double>::quiet_NaN(), false};
    const double log_term = (tau / (64.0 * x * x * x)) * detail::em_log_sq_ratio(x, tau);
    const double pole_term = tau * tau / (8.0 * x * x * (tau * tau - 4.0 * x * x));
    const double value = cfg.coupling_sq() / (pi * pi) * (log_term - pole_term);
    return {DispersionKind::VelocitySquared, value, true};
}

}  // namespace qbm

#endif  // QBM_EM_COMPARISON_HPP
