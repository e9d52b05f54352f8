#include "annuli/spectral.hpp"

#include <cmath>
#include <string>

#include "annuli/errors.hpp"
#include "annuli/kernels.hpp"
#include "annuli/numeric.hpp"

namespace annuli {

namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr double kJ1Switch = 16.0;

long double j1_series(long double x) {
  // J1(x) = sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!)
  const long double q = -(x * 0.5L) * (x * 0.5L);
  long double term = x * 0.5L;
  long double sum = term;
  for (int k = 1; k < 120; ++k) {
    term *= q / (static_cast<long double>(k) * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-24L * std::abs(sum) + 1e-320L) break;
  }
  return sum;
}

long double j1_asymptotic(long double x) {
  // Hankel expansion: J1 = sqrt(2/(pi x)) (P cos w - Q sin w), w = x - 3 pi/4,
  // with a_k = a_{k-1} (mu - (2k-1)^2)/(8 k x), mu = 4. Truncated at the
  // smallest term.
  const long double mu = 4.0L;
  long double a = 1.0L;
  long double p = 1.0L, qsum = 0.0L;
  long double prev = std::numeric_limits<long double>::max();
  for (int k = 1; k < 40; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    a *= (mu - odd * odd) / (8.0L * k * x);
    if (std::abs(a) >= prev) break;
    prev = std::abs(a);
    switch (k % 4) {
      case 0: p += a; break;
      case 1: qsum += a; break;
      case 2: p -= a; break;
      case 3: qsum -= a; break;
    }
    if (std::abs(a) < 1e-24L) break;
  }
  const long double w = x - 0.75L * kPiL;
  return sqrtl(2.0L / (kPiL * x)) * (p * cosl(w) - qsum * sinl(w));
}

}  // namespace

double bessel_j1(double x) {
  const double ax = std::abs(x);
  long double v = ax <= kJ1Switch ? j1_series(ax) : j1_asymptotic(ax);
  return static_cast<double>(x < 0 ? -v : v);
}

void SpectralParams::validate() const {
  if (M > T) {
    throw GuardrailError(
        "guardrail M <= T breached (M=" + std::to_string(M) +
        ", T=" + std::to_string(T) +
        "): the smoothness parameter must stay well below the scale");
  }
  if (M > 0 && L / std::sqrt(M) > 0.2) {
    throw GuardrailError(
        "guardrail L/sqrt(M) <= 0.2 breached (L=" + std::to_string(L) +
        ", M=" + std::to_string(M) +
        "): the annulus must be wider than its smoothed sides");
  }
}

namespace {

uint64_t series_limit(double bound, const RTable& table, const char* who) {
  if (bound < 1.0) return 0;
  const auto limit = static_cast<uint64_t>(std::floor(bound));
  if (limit > table.n_max) {
    throw UsageError(std::string(who) + ": series needs r(n) up to " +
                     std::to_string(limit) + " but table has n_max=" +
                     std::to_string(table.n_max));
  }
  return limit;
}

}  // namespace

double nf_exact_bessel(double t, double M, const RTable& table) {
  if (t < 1.0) throw UsageError("nf_exact_bessel requires t >= 1");
  const uint64_t limit = series_limit(M, table, "nf_exact_bessel");
  CompensatedSum sum;
  const long double tl = t;
  for (uint64_t n = 1; n <= limit; ++n) {
    const uint32_t rn = table.r[n];
    if (rn == 0) continue;
    const double damp = psi_hat(std::sqrt(static_cast<double>(n) / M));
    if (damp == 0.0) continue;
    const long double sq = sqrtl(static_cast<long double>(n));
    const double j = bessel_j1(static_cast<double>(2.0L * kPiL * tl * sq));
    sum.add(rn * j / static_cast<double>(sq) * damp);
  }
  return M_PI * t * t + t * sum.value();
}

double nf_asymptotic(double t, double M, const RTable& table) {
  if (t < 1.0) throw UsageError("nf_asymptotic requires t >= 1");
  const uint64_t limit = series_limit(M, table, "nf_asymptotic");
  CompensatedSum sum;
  const long double tl = t;
  for (uint64_t n = 1; n <= limit; ++n) {
    const uint32_t rn = table.r[n];
    if (rn == 0) continue;
    const double damp = psi_hat(std::sqrt(static_cast<double>(n) / M));
    if (damp == 0.0) continue;
    const long double sq = sqrtl(static_cast<long double>(n));
    const double osc =
        static_cast<double>(cosl(2.0L * kPiL * tl * sq + 0.25L * kPiL));
    sum.add(rn / std::pow(static_cast<double>(n), 0.75) * osc * damp);
  }
  return M_PI * t * t - std::sqrt(t) / M_PI * sum.value();
}

double s_smooth(double t, const SpectralParams& params, const RTable& table) {
  if (t < 1.0) throw UsageError("s_smooth requires t >= 1");
  const uint64_t limit = series_limit(params.M, table, "s_smooth");
  CompensatedSum sum;
  const long double shifted = static_cast<long double>(t) + 0.5L / params.L;
  for (uint64_t n = 1; n <= limit; ++n) {
    const uint32_t rn = table.r[n];
    if (rn == 0) continue;
    const double damp = psi_hat(std::sqrt(static_cast<double>(n) / params.M));
    if (damp == 0.0) continue;
    const long double sq = sqrtl(static_cast<long double>(n));
    const double width = static_cast<double>(sinl(kPiL * sq / params.L));
    const double osc =
        static_cast<double>(sinl(2.0L * kPiL * shifted * sq + 0.25L * kPiL));
    sum.add(rn / std::pow(static_cast<double>(n), 0.75) * width * osc * damp);
  }
  return 2.0 / M_PI * sum.value();
}

double n_truncated_explicit(double t, double X, const RTable& table) {
  if (t < 1.0) throw UsageError("n_truncated_explicit requires t >= 1");
  const uint64_t limit = series_limit(X, table, "n_truncated_explicit");
  CompensatedSum sum;
  const long double tl = t;
  for (uint64_t n = 1; n <= limit; ++n) {
    const uint32_t rn = table.r[n];
    if (rn == 0) continue;
    const long double sq = sqrtl(static_cast<long double>(n));
    const double osc =
        static_cast<double>(cosl(2.0L * kPiL * tl * sq + 0.25L * kPiL));
    sum.add(rn / std::pow(static_cast<double>(n), 0.75) * osc);
  }
  return M_PI * t * t - std::sqrt(t) / M_PI * sum.value();
}

double s_sharp_truncated(double t, double L, double X, const RTable& table) {
  if (t < 1.0) throw UsageError("s_sharp_truncated requires t >= 1");
  const uint64_t limit = series_limit(X, table, "s_sharp_truncated");
  CompensatedSum sum;
  const long double shifted = static_cast<long double>(t) + 0.5L / L;
  for (uint64_t n = 1; n <= limit; ++n) {
    const uint32_t rn = table.r[n];
    if (rn == 0) continue;
    const long double sq = sqrtl(static_cast<long double>(n));
    const double width = static_cast<double>(sinl(kPiL * sq / L));
    const double osc =
        static_cast<double>(sinl(2.0L * kPiL * shifted * sq + 0.25L * kPiL));
    sum.add(rn / std::pow(static_cast<double>(n), 0.75) * width * osc);
  }
  return 2.0 / M_PI * sum.value();
}

}  // namespace annuli
