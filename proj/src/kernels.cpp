#include "annuli/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "annuli/errors.hpp"
#include "annuli/numeric.hpp"
#include "annuli/rng.hpp"

namespace annuli {

double psi_hat(double y) {
  y = std::abs(y);
  if (y >= 1.0) return 0.0;
  return std::exp(-y * y / (1.0 - y * y));
}

WindowKind window_kind_from_name(std::string_view name) {
  if (name == "uniform") return WindowKind::kUniform;
  if (name == "bump") return WindowKind::kSmoothBump;
  throw UsageError("unknown window '" + std::string(name) +
                   "' (expected uniform or bump)");
}

std::string_view window_kind_name(WindowKind kind) {
  return kind == WindowKind::kUniform ? "uniform" : "bump";
}

namespace {

double bump_unnormalized(double x) {
  if (x <= 1.0 || x >= 2.0) return 0.0;
  return std::exp(-1.0 / ((x - 1.0) * (2.0 - x)));
}

constexpr int kBumpCdfCells = 8192;

}  // namespace

Window::Window(WindowKind kind) : kind_(kind) {
  if (kind_ != WindowKind::kSmoothBump) return;
  // Normalizing constant and a cumulative grid via composite Simpson; the
  // integrand is smooth, so the grid is accurate far beyond sampling needs.
  const double h = 1.0 / kBumpCdfCells;
  bump_cdf_.assign(kBumpCdfCells + 1, 0.0);
  double acc = 0.0;
  for (int i = 0; i < kBumpCdfCells; ++i) {
    const double a = 1.0 + i * h;
    acc += h / 6.0 *
           (bump_unnormalized(a) + 4.0 * bump_unnormalized(a + 0.5 * h) +
            bump_unnormalized(a + h));
    bump_cdf_[i + 1] = acc;
  }
  bump_norm_ = 1.0 / acc;
  for (auto& v : bump_cdf_) v *= bump_norm_;
  bump_cdf_.back() = 1.0;
  bump_peak_ = bump_norm_ * std::exp(-4.0);  // maximum is at x = 3/2
}

const Window& Window::uniform() {
  static const Window w(WindowKind::kUniform);
  return w;
}

const Window& Window::smooth_bump() {
  static const Window w(WindowKind::kSmoothBump);
  return w;
}

const Window& Window::by_kind(WindowKind kind) {
  return kind == WindowKind::kUniform ? uniform() : smooth_bump();
}

double Window::density(double x) const {
  if (kind_ == WindowKind::kUniform) return (x >= 1.0 && x <= 2.0) ? 1.0 : 0.0;
  return bump_norm_ * bump_unnormalized(x);
}

double Window::cdf(double x) const {
  if (x <= 1.0) return 0.0;
  if (x >= 2.0) return 1.0;
  if (kind_ == WindowKind::kUniform) return x - 1.0;
  const double pos = (x - 1.0) * kBumpCdfCells;
  const int cell = std::min(static_cast<int>(pos), kBumpCdfCells - 1);
  const double frac = pos - cell;
  return bump_cdf_[cell] + frac * (bump_cdf_[cell + 1] - bump_cdf_[cell]);
}

double Window::sample_one(uint64_t seed, uint64_t index) const {
  CounterRng rng(seed, index);
  if (kind_ == WindowKind::kUniform) return 1.0 + rng.next_unit();
  // rejection against a flat envelope of height bump_peak_
  for (;;) {
    const double x = 1.0 + rng.next_unit();
    const double h = bump_peak_ * rng.next_unit();
    if (h < density(x)) return x;
  }
}

std::vector<double> Window::sample(std::size_t count, uint64_t seed) const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = sample_one(seed, i);
  return out;
}

std::complex<double> window_fourier(const Window& window, double xi,
                                    double abs_tol) {
  const int panels =
      static_cast<int>(std::min(2.0 * std::abs(xi) + 1.0, 1.0e6));
  const auto re = integrate(
      [&](double x) { return window.density(x) * std::cos(2.0 * M_PI * x * xi); },
      1.0, 2.0, abs_tol * 0.5, panels);
  const auto im = integrate(
      [&](double x) { return -window.density(x) * std::sin(2.0 * M_PI * x * xi); },
      1.0, 2.0, abs_tol * 0.5, panels);
  if (!re.converged || !im.converged) {
    throw QuadratureError(
        "window_fourier did not reach tolerance " + std::to_string(abs_tol) +
            " (achieved " +
            std::to_string(re.error_estimate + im.error_estimate) + ")",
        re.error_estimate + im.error_estimate);
  }
  return {re.value, im.value};
}

}  // namespace annuli
