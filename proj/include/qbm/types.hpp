#ifndef QBM_TYPES_HPP
#define QBM_TYPES_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

// Core domain types for the boundary-vacuum Brownian motion library.
// Natural units throughout: hbar = c = 1, so every quantity carries a power
// of length. The reflecting boundary sits at the origin; the test particle is
// held at distance x > 0 from it.

namespace qbm {

inline constexpr double pi = std::numbers::pi;

// Scalar test particle: coupling g, mass m, fixed distance x from the
// boundary. g = 0 is allowed (all dispersions vanish identically).
struct ParticleConfig {
    double charge = 1.0;    // scalar coupling g
    double mass = 1.0;      // m > 0
    double distance = 1.0;  // x > 0

    void validate() const {
        if (!std::isfinite(charge))
            throw std::domain_error("ParticleConfig: charge must be finite");
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw std::domain_error("ParticleConfig: mass must be positive");
        if (!(distance > 0.0) || !std::isfinite(distance))
            throw std::domain_error("ParticleConfig: distance must be positive");
    }

    // g^2/m^2, the prefactor every dispersion scales with
    double coupling_sq() const { return (charge / mass) * (charge / mass); }
};

// Electric charge at distance x from a perfectly reflecting plane, for the
// electromagnetic comparison formulas.
struct EmParticleConfig {
    double charge = 1.0;    // electric charge e
    double mass = 1.0;      // m > 0
    double distance = 1.0;  // x > 0

    void validate() const {
        if (!std::isfinite(charge))
            throw std::domain_error("EmParticleConfig: charge must be finite");
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw std::domain_error("EmParticleConfig: mass must be positive");
        if (!(distance > 0.0) || !std::isfinite(distance))
            throw std::domain_error("EmParticleConfig: distance must be positive");
    }

    double coupling_sq() const { return (charge / mass) * (charge / mass); }
};

// Interval since the sudden switch-on of the particle-field coupling.
struct MeasuringTime {
    double tau = 0.0;

    void validate() const {
        if (!(tau >= 0.0) || !std::isfinite(tau))
            throw std::domain_error("MeasuringTime: tau must be finite and >= 0");
    }
};

enum class DispersionKind { VelocitySquared, PositionSquared };

// A dispersion observable. On the round-trip locus tau = 2x the velocity
// dispersions diverge: there `regular` is false and `value` holds a
// non-finite sentinel (the signed infinity of the limit where both one-sided
// limits agree, NaN where they do not). Callers must branch on `regular`;
// sweep runners emit gap markers instead of aborting.
struct DispersionValue {
    DispersionKind kind;
    double value;
    bool regular;
};

// Open tau interval, e.g. the subvacuum window (0, 2*sqrt(2)*x).
struct TauInterval {
    double lower;
    double upper;

    bool contains(double tau) const { return tau > lower && tau < upper; }
};

// Detects tau on the light round-trip locus tau = 2x. Binary doubles cannot
// represent the locus exactly for generic x, so equality is a 4-ulp relative
// band. Shared by the scalar and EM dispersions.
inline bool at_round_trip_time(double distance, double tau) {
    const double round_trip = 2.0 * distance;
    const double scale = std::max(std::abs(tau), round_trip);
    return std::abs(tau - round_trip) <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

}  // namespace qbm

#endif  // QBM_TYPES_HPP
