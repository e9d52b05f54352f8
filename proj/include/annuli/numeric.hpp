#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace annuli {

// Neumaier-compensated accumulator. Keeps long trigonometric sums stable to
// ~eps * sum|terms| independent of summation order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Exact floor square roots. Seeded from a floating approximation and then
// corrected until s^2 <= n < (s+1)^2 holds in integer arithmetic.
uint64_t isqrt_u64(uint64_t n);
unsigned __int128 isqrt_u128(unsigned __int128 n);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  long evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) to an absolute tolerance. `initial_panels`
// pre-splits [a,b]; pass roughly the oscillation count for wavy integrands.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, int initial_panels = 1,
                           int max_depth = 28);

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace annuli
