#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "annuli/arith.hpp"
#include "annuli/kernels.hpp"
#include "annuli/numeric.hpp"

namespace annuli {

struct VarianceReport {
  double sigma2_spectral = 0.0;   // exact truncated spectral series
  double sigma2_asymptotic = 0.0; // 16 log L / L
  double ratio = 0.0;             // spectral / asymptotic
  double L = 0.0;
  double M = 0.0;
};

// sigma^2 = (2/pi^2) sum_{n<=M} r(n)^2 / n^{3/2} sin^2(pi sqrt(n)/L)
//           psi_hat^2(sqrt(n/M)). Throws UsageError when M exceeds the table.
VarianceReport variance_spectral(double L, double M, const RTable& table);

// 16 log(L)/L; throws UsageError for L <= 1.
double variance_asymptotic(double L);

// Standard normal moments: m!/(2^{m/2} (m/2)!) for even m, 0 for odd m.
double gaussian_moment(int m);

// Mergeable power sums up to order 6. Merging shards is associative and
// commutative up to reordering noise.
class MomentAccumulator {
 public:
  static constexpr int kMaxOrder = 6;

  void add(double x);
  void merge(const MomentAccumulator& other);
  uint64_t count() const { return n_; }
  double power_sum(int order) const;
  double moment(int order) const;  // (1/n) sum x^order

 private:
  uint64_t n_ = 0;
  std::array<CompensatedSum, kMaxOrder> sums_;
};

struct Histogram {
  std::vector<double> edges;     // bins + 1 entries
  std::vector<uint64_t> counts;  // out-of-range values clamp to the end bins

  static Histogram collect(const std::vector<double>& xs, int bins = 61,
                           double lo = -5.0, double hi = 5.0);
};

// Supremum distance between the empirical CDF and the standard normal.
double ks_distance_normal(std::vector<double> xs);

struct DistributionReport {
  uint64_t samples = 0;
  double sigma2 = 0.0;  // normalizer actually used
  // Raw moments of the normalized samples, orders 1..6 (index 0 unused),
  // with batch-means standard errors (10 batches).
  std::array<double, 7> moments{};
  std::array<double, 7> moment_se{};
  double ks = 0.0;
  Histogram histogram;
  std::vector<double> t_values;
  std::vector<double> values;
  std::vector<double> normalized;
};

struct ExperimentOptions {
  int threads = 0;  // 0 = hardware concurrency
  int histogram_bins = 61;
  double histogram_lo = -5.0;
  double histogram_hi = 5.0;
  uint64_t sharp_count_cap = 100000;  // largest T for exact counting
  bool enforce_guardrails = true;
};

// Smooth statistic experiment: draws t = T * window sample, normalizes
// s_smooth by the exact spectral sigma, and reports moments / KS / histogram.
DistributionReport run_distribution_experiment(
    double T, double L, double M, uint64_t samples, const Window& window,
    uint64_t seed, const RTable& table, const ExperimentOptions& opts = {});

// Sharp statistic experiment: t uniform on [T, 2T] (dyadic radii), exact
// counting, normalized by the asymptotic sigma^2 = 16 log L / L.
DistributionReport run_sharp_distribution_experiment(
    double T, double L, uint64_t samples, uint64_t seed,
    const ExperimentOptions& opts = {});

struct UnsmoothingReport {
  double gap = 0.0;  // <(S - S~)^2> over the uniform window
  double log_m_over_sqrt_m = 0.0;
  double ratio = 0.0;  // gap / (log M / sqrt M)
  double sigma2_spectral = 0.0;
  double gap_over_sigma2 = 0.0;
  uint64_t samples = 0;
};

// Monte-Carlo mean-square difference between the sharp and smooth remainders.
UnsmoothingReport unsmoothing_gap(double T, double L, double M,
                                  uint64_t samples, uint64_t seed,
                                  const RTable& table,
                                  const ExperimentOptions& opts = {});

// <sin(2 pi (t + 1/2L) sqrt(m) + pi/4) sin(... sqrt(n) ...)> by quadrature
// against the window density; diagnoses off-diagonal suppression.
double phase_pair_average(uint64_t m, uint64_t n, double T, double L,
                          const Window& window);

}  // namespace annuli
