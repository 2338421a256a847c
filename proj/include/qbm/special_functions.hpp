#ifndef QBM_SPECIAL_FUNCTIONS_HPP
#define QBM_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qbm/summation.hpp"

namespace qbm {

// Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1.
inline double pochhammer(double a, int n) {
    if (n < 0) throw std::domain_error("pochhammer: n must be nonnegative");
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= a + static_cast<double>(k);
    if (!std::isfinite(p))
        throw std::overflow_error("pochhammer: overflow for a=" + std::to_string(a) +
                                  ", n=" + std::to_string(n));
    return p;
}

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    bool converged = false;
    double error_estimate = std::numeric_limits<double>::infinity();
};

// 2F2(1,1; 3/2,2; z) by direct series summation. With the parameter pattern
// fixed, the series collapses to
//
//   sum_{n>=0} z^n / ((3/2)_n (n+1)),   t_{n+1}/t_n = z (n+1) / ((n+3/2)(n+2)),
//
// an entire function, summed with compensated accumulation until the
// geometric tail bound drops below `tol` relative to the accumulated value.
// error_estimate is likewise relative and includes a roundoff floor of
// 2 eps * sum|t_n| / |value|, which is what limits accuracy for large
// negative z where the series alternates; the practical envelope at double
// precision is |z| <= 50.
inline SeriesResult hyp2f2_1_1_3h2(double z, double tol, int max_terms = 2000) {
    if (!(tol > 0.0)) throw std::domain_error("hyp2f2_1_1_3h2: tol must be positive");
    if (!std::isfinite(z)) throw std::domain_error("hyp2f2_1_1_3h2: z must be finite");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    CompensatedSum sum(1.0);  // t_0 = 1
    double term = 1.0;
    double abs_sum = 1.0;

    for (int n = 0; n < max_terms; ++n) {
        term *= z * (n + 1.0) / ((n + 1.5) * (n + 2.0));
        sum += term;
        abs_sum += std::abs(term);

        // Ratios |t_{m+1}/t_m| decrease once m+3/2 > |z|; r bounds them all
        // from the next term on, so the tail is a dominated geometric series.
        const double r = std::abs(z) * (n + 2.0) / ((n + 2.5) * (n + 3.0));
        if (r < 1.0) {
            const double scale = std::max(std::abs(sum.value()), tiny);
            const double tail = std::abs(term) * r / (1.0 - r);
            const double rel_error = (tail + 2.0 * eps * abs_sum) / scale;
            if (rel_error <= tol) return {sum.value(), n + 2, true, rel_error};
            if (term == 0.0)  // series terminated but tol is below the roundoff floor
                return {sum.value(), n + 2, false, rel_error};
        }
    }

    // Term budget exhausted (pathological tol, or cancellation floor above
    // tol); report the best estimate.
    const double scale = std::max(std::abs(sum.value()), tiny);
    const double r = std::abs(z) / (max_terms + 1.5);
    const double tail =
        r < 1.0 ? std::abs(term) * r / (1.0 - r) : std::numeric_limits<double>::infinity();
    return {sum.value(), max_terms + 1, false, (tail + 2.0 * eps * abs_sum) / scale};
}

}  // namespace qbm

#endif  // QBM_SPECIAL_FUNCTIONS_HPP
