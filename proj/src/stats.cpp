#include "annuli/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "annuli/counting.hpp"
#include "annuli/errors.hpp"
#include "annuli/parallel.hpp"
#include "annuli/spectral.hpp"

namespace annuli {

VarianceReport variance_spectral(double L, double M, const RTable& table) {
  VarianceReport rep;
  rep.L = L;
  rep.M = M;
  rep.sigma2_asymptotic = variance_asymptotic(L);
  uint64_t limit = 0;
  if (M >= 1.0) {
    limit = static_cast<uint64_t>(std::floor(M));
    if (limit > table.n_max) {
      throw UsageError("variance_spectral: M=" + std::to_string(M) +
                       " exceeds table n_max=" + std::to_string(table.n_max));
    }
  }
  CompensatedSum sum;
  for (uint64_t n = 1; n <= limit; ++n) {
    const uint32_t rn = table.r[n];
    if (rn == 0) continue;
    const double damp = psi_hat(std::sqrt(static_cast<double>(n) / M));
    if (damp == 0.0) continue;
    const double sq = std::sqrt(static_cast<double>(n));
    const double s = std::sin(M_PI * sq / L);
    sum.add(static_cast<double>(rn) * rn / (static_cast<double>(n) * sq) * s *
            s * damp * damp);
  }
  rep.sigma2_spectral = 2.0 / (M_PI * M_PI) * sum.value();
  rep.ratio = rep.sigma2_spectral / rep.sigma2_asymptotic;
  return rep;
}

double variance_asymptotic(double L) {
  if (!(L > 1.0)) {
    throw UsageError("variance_asymptotic requires L > 1, got " +
                     std::to_string(L));
  }
  return 16.0 * std::log(L) / L;
}

double gaussian_moment(int m) {
  if (m < 0) throw UsageError("gaussian_moment requires m >= 0");
  if (m % 2 == 1) return 0.0;
  double g = 1.0;  // recurrence g(m) = (m-1) g(m-2)
  for (int k = 2; k <= m; k += 2) g *= (k - 1);
  return g;
}

void MomentAccumulator::add(double x) {
  ++n_;
  double p = 1.0;
  for (int k = 0; k < kMaxOrder; ++k) {
    p *= x;
    sums_[k].add(p);
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  n_ += other.n_;
  for (int k = 0; k < kMaxOrder; ++k) sums_[k].add(other.sums_[k].value());
}

double MomentAccumulator::power_sum(int order) const {
  if (order < 1 || order > kMaxOrder) {
    throw UsageError("moment order must be in 1..6");
  }
  return sums_[order - 1].value();
}

double MomentAccumulator::moment(int order) const {
  if (n_ == 0) throw UsageError("moment of an empty accumulator");
  return power_sum(order) / static_cast<double>(n_);
}

Histogram Histogram::collect(const std::vector<double>& xs, int bins,
                             double lo, double hi) {
  if (bins < 1 || !(hi > lo)) throw UsageError("bad histogram spec");
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) {
    h.edges[i] = lo + (hi - lo) * i / bins;
  }
  h.counts.assign(bins, 0);
  const double w = (hi - lo) / bins;
  for (double x : xs) {
    auto b = static_cast<int64_t>(std::floor((x - lo) / w));
    b = std::clamp<int64_t>(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

double ks_distance_normal(std::vector<double> xs) {
  if (xs.empty()) throw UsageError("KS distance of an empty sample");
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = normal_cdf(xs[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

namespace {

// Moments + batch-means standard errors + KS + histogram from the normalized
// samples, in index order (deterministic for any thread count).
DistributionReport summarize(std::vector<double> ts, std::vector<double> vals,
                             std::vector<double> norm, double sigma2,
                             const ExperimentOptions& opts) {
  DistributionReport rep;
  rep.samples = norm.size();
  rep.sigma2 = sigma2;

  MomentAccumulator acc;
  for (double x : norm) acc.add(x);
  for (int m = 1; m <= MomentAccumulator::kMaxOrder; ++m) {
    rep.moments[m] = acc.moment(m);
  }

  constexpr int kBatches = 10;
  const std::size_t per = norm.size() / kBatches;
  if (per >= 1) {
    for (int m = 1; m <= MomentAccumulator::kMaxOrder; ++m) {
      double mean = 0.0;
      std::array<double, kBatches> bm{};
      for (int b = 0; b < kBatches; ++b) {
        CompensatedSum s;
        for (std::size_t i = b * per; i < (b + 1) * per; ++i) {
          s.add(std::pow(norm[i], m));
        }
        bm[b] = s.value() / static_cast<double>(per);
        mean += bm[b];
      }
      mean /= kBatches;
      double varsum = 0.0;
      for (int b = 0; b < kBatches; ++b) {
        varsum += (bm[b] - mean) * (bm[b] - mean);
      }
      rep.moment_se[m] = std::sqrt(varsum / (kBatches - 1.0) / kBatches);
    }
  }

  rep.ks = ks_distance_normal(norm);
  rep.histogram = Histogram::collect(norm, opts.histogram_bins,
                                     opts.histogram_lo, opts.histogram_hi);
  rep.t_values = std::move(ts);
  rep.values = std::move(vals);
  rep.normalized = std::move(norm);
  return rep;
}

}  // namespace

DistributionReport run_distribution_experiment(double T, double L, double M,
                                               uint64_t samples,
                                               const Window& window,
                                               uint64_t seed,
                                               const RTable& table,
                                               const ExperimentOptions& opts) {
  if (samples < 100) {
    throw UsageError("run_distribution_experiment requires samples >= 100");
  }
  SpectralParams params{.M = M, .L = L, .T = T};
  if (opts.enforce_guardrails) params.validate();

  const double sigma2 = variance_spectral(L, M, table).sigma2_spectral;
  const double sigma = std::sqrt(sigma2);

  std::vector<double> ts(samples), vals(samples), norm(samples);
  parallel_for(samples, opts.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      ts[i] = T * window.sample_one(seed, i);
      vals[i] = s_smooth(ts[i], params, table);
      norm[i] = sigma2 > 0.0 ? vals[i] / sigma : 0.0;
    }
  });
  return summarize(std::move(ts), std::move(vals), std::move(norm), sigma2,
                   opts);
}

DistributionReport run_sharp_distribution_experiment(
    double T, double L, uint64_t samples, uint64_t seed,
    const ExperimentOptions& opts) {
  if (samples < 1) throw UsageError("need at least one sample");
  if (T > static_cast<double>(opts.sharp_count_cap)) {
    throw ResourceError(
        "run_sharp_distribution_experiment: T=" + std::to_string(T) +
        " exceeds the exact-counting cap " +
        std::to_string(opts.sharp_count_cap));
  }
  const double sigma2 = variance_asymptotic(L);
  const double sigma = std::sqrt(sigma2);
  const Dyadic rho = Dyadic::from_double(1.0 / L);
  const Window& window = Window::uniform();

  std::vector<double> ts(samples), vals(samples), norm(samples);
  parallel_for(samples, opts.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Dyadic t = Dyadic::from_double(T * window.sample_one(seed, i));
      ts[i] = t.to_double();
      vals[i] = s_sharp(AnnulusSpec{t, rho});
      norm[i] = vals[i] / sigma;
    }
  });
  return summarize(std::move(ts), std::move(vals), std::move(norm), sigma2,
                   opts);
}

UnsmoothingReport unsmoothing_gap(double T, double L, double M,
                                  uint64_t samples, uint64_t seed,
                                  const RTable& table,
                                  const ExperimentOptions& opts) {
  if (samples < 1) throw UsageError("need at least one sample");
  if (T > static_cast<double>(opts.sharp_count_cap)) {
    throw ResourceError("unsmoothing_gap: T=" + std::to_string(T) +
                        " exceeds the exact-counting cap " +
                        std::to_string(opts.sharp_count_cap));
  }
  const Dyadic rho = Dyadic::from_double(1.0 / L);
  // Use the width the dyadic rho actually realizes, so both statistics see
  // the same annulus.
  const SpectralParams params{.M = M, .L = 1.0 / rho.to_double(), .T = T};
  const Window& window = Window::uniform();

  std::vector<double> diff(samples);
  parallel_for(samples, opts.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Dyadic t = Dyadic::from_double(T * window.sample_one(seed, i));
      const double sharp = s_sharp(AnnulusSpec{t, rho});
      const double smooth = s_smooth(t.to_double(), params, table);
      diff[i] = sharp - smooth;
    }
  });

  CompensatedSum sq;
  for (double d : diff) sq.add(d * d);

  UnsmoothingReport rep;
  rep.samples = samples;
  rep.gap = sq.value() / static_cast<double>(samples);
  rep.log_m_over_sqrt_m = M > 1.0 ? std::log(M) / std::sqrt(M) : 0.0;
  rep.ratio = rep.log_m_over_sqrt_m > 0.0 ? rep.gap / rep.log_m_over_sqrt_m : 0.0;
  rep.sigma2_spectral = variance_spectral(params.L, M, table).sigma2_spectral;
  rep.gap_over_sigma2 =
      rep.sigma2_spectral > 0.0 ? rep.gap / rep.sigma2_spectral : 0.0;
  return rep;
}

double phase_pair_average(uint64_t m, uint64_t n, double T, double L,
                          const Window& window) {
  if (m < 1 || n < 1) throw UsageError("phase_pair_average requires m, n >= 1");
  const double sm = std::sqrt(static_cast<double>(m));
  const double sn = std::sqrt(static_cast<double>(n));
  const double shift = 1.0 / (2.0 * L);
  const auto f = [&](double x) {
    const double t = T * x;
    return window.density(x) *
           std::sin(2.0 * M_PI * (t + shift) * sm + 0.25 * M_PI) *
           std::sin(2.0 * M_PI * (t + shift) * sn + 0.25 * M_PI);
  };
  const int panels = static_cast<int>(
      std::min(T * (sm + sn) + 16.0, 4.0e6));
  const auto q = integrate(f, 1.0, 2.0, 1e-9, panels, 12);
  if (!q.converged) {
    throw QuadratureError("phase_pair_average did not converge (achieved " +
                              std::to_string(q.error_estimate) + ")",
                          q.error_estimate);
  }
  return q.value;
}

}  // namespace annuli
