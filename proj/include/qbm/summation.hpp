#ifndef QBM_SUMMATION_HPP
#define QBM_SUMMATION_HPP

#include <cmath>

namespace qbm {

// Neumaier's variant of Kahan compensated summation. Unlike plain Kahan it
// stays accurate when an addend exceeds the running sum, which happens in the
// hypergeometric series once terms start to grow.
class CompensatedSum {
  public:
    CompensatedSum() = default;
    explicit CompensatedSum(double initial) : sum_(initial) {}

    CompensatedSum& operator+=(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
        return *this;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace qbm

#endif  // QBM_SUMMATION_HPP
