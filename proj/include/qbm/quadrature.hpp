#ifndef QBM_QUADRATURE_HPP
#define QBM_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbm/summation.hpp"

// Globally adaptive quadrature on a finite interval, built for integrands
// with logarithmic singularities at known locations.
//
//   * The interval is split at every declared singular point, so singular
//     points only ever appear as panel endpoints and are never sampled.
//   * A panel touching a singular endpoint is integrated after the stretching
//     substitution t = t0 +/- u^2, which turns ln|t - t0| into u*ln(u^2)-type
//     behavior with a finite limit at the endpoint.
//   * Each (transformed) panel is estimated with a 15-point Kronrod rule and
//     its embedded 7-point Gauss rule; the panel with the largest error
//     estimate is bisected until the requested tolerance is met or the
//     subdivision budget runs out.
//
// All integrands in this library are absolutely integrable; there is no
// principal-value machinery here.

namespace qbm {

struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int max_subdivisions = 500;
    // Points where the integrand is (possibly) singular. Points outside the
    // integration interval are clipped away; points equal to an endpoint mark
    // that endpoint as singular.
    std::vector<double> singularities{};

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::domain_error("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::domain_error("QuadratureSpec: max_subdivisions must be positive");
    }
};

struct QuadResult {
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
    int subdivisions = 0;
    bool converged = false;
};

// Thrown by the higher-level evaluators when a quadrature fails to converge;
// carries the best estimate and the error actually achieved.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& context, double best_value, double achieved_error)
        : std::runtime_error(context + " (best estimate " + std::to_string(best_value) +
                             ", achieved error " + std::to_string(achieved_error) + ")"),
          best_value_(best_value),
          achieved_error_(achieved_error) {}

    double best_value() const { return best_value_; }
    double achieved_error() const { return achieved_error_; }

  private:
    double best_value_;
    double achieved_error_;
};

namespace detail {

// 15-point Kronrod abscissae on [-1,1]; every other node is a 7-point Gauss
// node. Standard QUADPACK dqk15 constants.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGauss7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;
    double error;
};

// Kronrod 15 / Gauss 7 pair with the QUADPACK error heuristic.
template <class F>
PanelEstimate gauss_kronrod_15(F&& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv1[7];
    double fv2[7];
    const double fc = f(center);

    double resg = fc * kGauss7Weights[3];
    double resk = fc * kGk15Weights[7];
    double resabs = std::abs(resk);

    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;  // Gauss nodes sit at odd Kronrod indices
        const double absc = half * kGk15Nodes[jtw];
        const double f1 = f(center - absc);
        const double f2 = f(center + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kGauss7Weights[j] * (f1 + f2);
        resk += kGk15Weights[jtw] * (f1 + f2);
        resabs += kGk15Weights[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = half * kGk15Nodes[jtwm1];
        const double f1 = f(center - absc);
        const double f2 = f(center + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kGk15Weights[jtwm1] * (f1 + f2);
        resabs += kGk15Weights[jtwm1] * (std::abs(f1) + std::abs(f2));
    }

    const double reskh = resk * 0.5;
    double resasc = kGk15Weights[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kGk15Weights[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double dhalf = std::abs(half);
    resabs *= dhalf;
    resasc *= dhalf;

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > uflow / (50.0 * eps)) err = std::max(eps * 50.0 * resabs, err);

    return {resk * half, err};
}

}  // namespace detail

// Adaptive integral of f over [a, b] under `spec`. Returns the estimate, the
// error bound, the number of bisections spent, and whether the bound meets
// max(abs_tol, rel_tol * |value|). Does not throw on nonconvergence: the best
// estimate and the achieved error are reported with converged = false.
template <class F>
QuadResult adaptive_quad(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a <= b))
        throw std::domain_error("adaptive_quad: requires finite a <= b");
    if (a == b) return {0.0, 0.0, 0, true};

    // Split points; singularities equal to a or b mark the endpoint singular.
    bool a_singular = false;
    bool b_singular = false;
    std::vector<double> cuts;
    for (double s : spec.singularities) {
        if (s == a) a_singular = true;
        else if (s == b) b_singular = true;
        else if (a < s && s < b) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    struct Segment {
        double lo, hi;
        bool lo_singular, hi_singular;
    };
    std::vector<Segment> segments;
    {
        double lo = a;
        bool lo_sing = a_singular;
        for (double c : cuts) {
            segments.push_back({lo, c, lo_sing, true});
            lo = c;
            lo_sing = true;
        }
        segments.push_back({lo, b, lo_sing, b_singular});
    }

    // Panel integrands. A singular endpoint t0 is absorbed by t = t0 +/- u^2;
    // the factor 2u kills the logarithm at u -> 0, and the u*u == 0 rounding
    // guard returns that limit when refinement aliases onto t0 itself.
    std::vector<std::function<double(double)>> integrands;
    struct Panel {
        std::size_t fn;
        double lo, hi;
        double value, error;
    };
    std::vector<Panel> panels;

    auto add_plain = [&](double lo, double hi) {
        integrands.emplace_back([&f](double t) { return f(t); });
        panels.push_back({integrands.size() - 1, lo, hi, 0.0, 0.0});
    };
    auto add_left_singular = [&](double lo, double hi) {
        integrands.emplace_back([&f, lo](double u) {
            const double t = lo + u * u;
            if (t == lo) return 0.0;
            return 2.0 * u * f(t);
        });
        panels.push_back({integrands.size() - 1, 0.0, std::sqrt(hi - lo), 0.0, 0.0});
    };
    auto add_right_singular = [&](double lo, double hi) {
        integrands.emplace_back([&f, hi](double u) {
            const double t = hi - u * u;
            if (t == hi) return 0.0;
            return 2.0 * u * f(t);
        });
        panels.push_back({integrands.size() - 1, 0.0, std::sqrt(hi - lo), 0.0, 0.0});
    };

    for (const Segment& seg : segments) {
        if (seg.hi <= seg.lo) continue;
        if (seg.lo_singular && seg.hi_singular) {
            const double mid = seg.lo + 0.5 * (seg.hi - seg.lo);
            add_left_singular(seg.lo, mid);
            add_right_singular(mid, seg.hi);
        } else if (seg.lo_singular) {
            add_left_singular(seg.lo, seg.hi);
        } else if (seg.hi_singular) {
            add_right_singular(seg.lo, seg.hi);
        } else {
            add_plain(seg.lo, seg.hi);
        }
    }

    auto estimate = [&](Panel& p) {
        const auto est = detail::gauss_kronrod_15(integrands[p.fn], p.lo, p.hi);
        p.value = est.value;
        p.error = std::isfinite(est.error) && std::isfinite(est.value)
                      ? est.error
                      : std::numeric_limits<double>::infinity();
    };

    std::vector<Panel> done;  // panels too narrow to bisect further
    auto by_error = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    for (Panel& p : panels) estimate(p);
    std::make_heap(panels.begin(), panels.end(), by_error);

    auto totals = [&]() {
        CompensatedSum value;
        CompensatedSum error;
        for (const Panel& p : panels) {
            value += p.value;
            error += p.error;
        }
        for (const Panel& p : done) {
            value += p.value;
            error += p.error;
        }
        return std::pair<double, double>(value.value(), error.value());
    };

    int subdivisions = 0;
    for (;;) {
        const auto [value, error] = totals();
        if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value)))
            return {value, error, subdivisions, true};
        if (panels.empty() || subdivisions >= spec.max_subdivisions)
            return {value, error, subdivisions, false};

        std::pop_heap(panels.begin(), panels.end(), by_error);
        Panel worst = panels.back();
        panels.pop_back();

        const double mid = worst.lo + 0.5 * (worst.hi - worst.lo);
        if (!(worst.lo < mid && mid < worst.hi)) {
            done.push_back(worst);  // width at rounding limit
            continue;
        }

        Panel left{worst.fn, worst.lo, mid, 0.0, 0.0};
        Panel right{worst.fn, mid, worst.hi, 0.0, 0.0};
        estimate(left);
        estimate(right);
        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), by_error);
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), by_error);
        ++subdivisions;
    }
}

}  // namespace qbm

#endif  // QBM_QUADRATURE_HPP
