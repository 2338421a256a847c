#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "qbm/dispersion.hpp"
#include "qbm/field_oracle.hpp"
#include "qbm/quadrature.hpp"

using namespace qbm;

// Frozen 40-digit references.
namespace {
constexpr double kKernelCoincident = 0.1103178000763258;  // ln(4)/(4 pi)
constexpr double kIntegral_tau15 = 0.229014582870908577222;
constexpr double kIntegral_tau3 = 0.612012059996460702054;
constexpr double kTruncated_13_07 = 0.0949886672910685987824;
constexpr double kV_tau1 = -0.04578602386962169998;
constexpr double kV_tau4 = 0.17484957628302989342;
constexpr double kX2_tau1 = -0.0108984357415151112879;
}  // namespace

TEST_CASE("mode function satisfies the boundary condition") {
    std::mt19937 rng(20260826);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const std::complex<double> psi = mode_function(dist(rng), dist(rng), 0.0, dist(rng));
        CHECK(psi == std::complex<double>(0.0, 0.0));
    }
}

TEST_CASE("mode function amplitude and phase structure") {
    const std::complex<double> psi = mode_function(0.0, pi / 2.0, 1.0, 123.456);
    CHECK_THAT(psi.real(), Catch::Matchers::WithinRel(1.0 / std::sqrt(2.0 * pi * pi), 1e-15));
    CHECK_THAT(psi.imag(), Catch::Matchers::WithinAbs(0.0, 1e-16));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 5.0);
    for (int i = 0; i < 50; ++i) {
        const double omega = dist(rng), k = dist(rng), x = dist(rng);
        const double a0 = std::abs(mode_function(omega, k, x, 0.0));
        const double a1 = std::abs(mode_function(omega, k, x, dist(rng)));
        CHECK_THAT(a1, Catch::Matchers::WithinAbs(a0, 1e-15));
    }
    CHECK_THROWS_AS(mode_function(1.0, 1.0, -0.5, 0.0), std::domain_error);
}

TEST_CASE("propagator kernel: value, symmetry, light cone") {
    CHECK_THAT(kernel_im_gf({1.0, 5.0, 1.0, 5.0}),
               Catch::Matchers::WithinRel(kKernelCoincident, 1e-15));
    for (double dt : {0.3, 1.7, 2.9}) {
        CHECK(kernel_im_gf({1.0, dt, 1.0, 0.0}) == kernel_im_gf({1.0, 0.0, 1.0, dt}));
        CHECK(kernel_im_gf({0.7, dt, 1.3, 0.0}) == kernel_im_gf({1.3, dt, 0.7, 0.0}));
    }
    CHECK(kernel_im_gf({1.0, 2.0, 1.0, 0.0}) ==
          -std::numeric_limits<double>::infinity());  // |t-t'| = x+x'
    CHECK_THROWS_AS(kernel_im_gf({0.0, 0.0, 1.0, 0.0}), std::domain_error);
}

TEST_CASE("reduction identity on a constant integrand") {
    const QuadResult r =
        reduced_double_time_integral([](double) { return 2.5; }, 1.7);
    CHECK(r.converged);
    CHECK_THAT(r.value, Catch::Matchers::WithinRel(2.5 * 1.7 * 1.7, 1e-14));
}

TEST_CASE("integrated kernel matches a 2-D tensor-product quadrature (smooth case)") {
    const double tau = 1.5;  // below the light-cone distance x + x' = 2
    const double reduced = double_time_integral(1.0, 1.0, tau);
    CHECK_THAT(reduced, Catch::Matchers::WithinRel(kIntegral_tau15, 1e-10));

    QuadratureSpec spec;
    spec.abs_tol = spec.rel_tol = 1e-11;
    auto inner = [&](double t) {
        return adaptive_quad(
                   [&](double tp) {
                       return std::log(std::abs(4.0 - (t - tp) * (t - tp))) / (4.0 * pi);
                   },
                   0.0, tau, spec)
            .value;
    };
    const QuadResult full = adaptive_quad(inner, 0.0, tau, spec);
    REQUIRE(full.converged);
    CHECK_THAT(reduced, Catch::Matchers::WithinRel(full.value, 1e-8));
}

TEST_CASE("integrated kernel with an interior light-cone point") {
    const double value = double_time_integral(1.0, 1.0, 3.0);
    CHECK_THAT(value, Catch::Matchers::WithinRel(kIntegral_tau3, 1e-10));

    // refinement study: a much tighter request moves the result only slightly
    QuadratureSpec tight;
    tight.abs_tol = tight.rel_tol = 1e-12;
    CHECK_THAT(double_time_integral(1.0, 1.0, 3.0, tight),
               Catch::Matchers::WithinRel(value, 1e-6));

    // symmetric in (x, x') exactly: only the sum enters
    CHECK(double_time_integral(1.2, 0.8, 3.0) == double_time_integral(0.8, 1.2, 3.0));
    CHECK(double_time_integral(1.0, 1.0, 0.0) == 0.0);
}

TEST_CASE("truncated rectangle integral") {
    QuadratureSpec tight;
    tight.abs_tol = tight.rel_tol = 1e-12;
    CHECK_THAT(truncated_double_time_integral(1.0, 1.0, 1.3, 0.7, tight),
               Catch::Matchers::WithinRel(kTruncated_13_07, 1e-10));
    CHECK(truncated_double_time_integral(1.0, 1.0, 0.0, 0.7) == 0.0);
    CHECK(truncated_double_time_integral(1.0, 1.0, 1.3, 0.0) == 0.0);

    // square truncation reproduces the reduced form, smooth and singular
    for (double tau : {1.0, 3.0}) {
        CHECK_THAT(truncated_double_time_integral(1.0, 1.0, tau, tau, tight),
                   Catch::Matchers::WithinRel(double_time_integral(1.0, 1.0, tau, tight),
                                              1e-8));
    }

    // (t1, t2) ordering is immaterial up to quadrature error
    CHECK_THAT(truncated_double_time_integral(1.0, 1.0, 0.7, 1.3, tight),
               Catch::Matchers::WithinRel(kTruncated_13_07, 1e-10));

    // far from the light cone the kernel is nearly constant: integral ~ 2 ln(s)/(4 pi) t1 t2
    const double s = 1e6;
    const double expected = 2.0 * std::log(s) / (4.0 * pi) * 1.3 * 0.7;
    CHECK_THAT(truncated_double_time_integral(s / 2.0, s / 2.0, 1.3, 0.7, tight),
               Catch::Matchers::WithinRel(expected, 1e-9));
}

TEST_CASE("velocity oracle agrees with the closed form") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const FiniteDifferenceSpec fd = default_fd_spec(cfg.distance);
    CHECK_THAT(velocity_dispersion_oracle(cfg, {1.0}, fd).value,
               Catch::Matchers::WithinRel(kV_tau1, 1e-3));
    CHECK_THAT(velocity_dispersion_oracle(cfg, {4.0}, fd).value,
               Catch::Matchers::WithinRel(kV_tau4, 1e-3));
    CHECK(velocity_dispersion_oracle(ParticleConfig{0.0, 1.0, 1.0}, {1.0}, fd).value == 0.0);
}

TEST_CASE("velocity oracle step-locus conflicts are rejected") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(velocity_dispersion_oracle(cfg, {2.0}, {1e-3}), std::domain_error);
    CHECK_THROWS_AS(velocity_dispersion_oracle(cfg, {2.0015}, {1e-3}), std::domain_error);
    CHECK_NOTHROW(velocity_dispersion_oracle(cfg, {2.01}, {1e-3}));
    CHECK_THROWS_AS(velocity_dispersion_oracle(cfg, {1.0}, {1.5}), std::domain_error);
}

TEST_CASE("finite-difference error shrinks at second order") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const double closed = velocity_dispersion(cfg, {1.0}).value;
    const double err_2h = std::abs(velocity_dispersion_oracle(cfg, {1.0}, {2e-3}).value - closed);
    const double err_h = std::abs(velocity_dispersion_oracle(cfg, {1.0}, {1e-3}).value - closed);
    const double ratio = err_2h / err_h;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.5);
}

TEST_CASE("unequal-time correlation is symmetric") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    QuadratureSpec kernel_spec;
    kernel_spec.abs_tol = kernel_spec.rel_tol = 1e-12;
    const double a = velocity_correlation(cfg, 1.3, 0.7, {1e-3}, kernel_spec);
    const double b = velocity_correlation(cfg, 0.7, 1.3, {1e-3}, kernel_spec);
    // the 1/h^2 of the finite difference amplifies the kernel quadrature noise
    CHECK_THAT(a, Catch::Matchers::WithinRel(b, 1e-4));
    CHECK(std::isfinite(a));
}

TEST_CASE("position oracle agrees with the closed form") {
    const ParticleConfig cfg{1.0, 1.0, 1.0};
    const FiniteDifferenceSpec fd = default_fd_spec(cfg.distance);
    CHECK(position_dispersion_oracle(cfg, {0.0}, fd).value == 0.0);
    const DispersionValue oracle = position_dispersion_oracle(cfg, {1.0}, fd);
    CHECK(oracle.regular);
    CHECK_THAT(oracle.value, Catch::Matchers::WithinRel(kX2_tau1, 1e-2));
}
