#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

namespace annuli {

// Mollifier transform used by every spectral series: exp(-y^2/(1-y^2)) on
// |y| < 1, zero outside. Even, infinitely flat at the support edge, and
// psi_hat(0) = 1 so the kernel has unit mass.
double psi_hat(double y);

enum class WindowKind { kUniform, kSmoothBump };

WindowKind window_kind_from_name(std::string_view name);  // "uniform" | "bump"
std::string_view window_kind_name(WindowKind kind);

// Mass-one averaging density on [1,2] for the radius t/T. The uniform window
// realizes plain Lebesgue measure; the smooth bump has a transform that decays
// faster than any polynomial.
class Window {
 public:
  static const Window& uniform();
  static const Window& smooth_bump();
  static const Window& by_kind(WindowKind kind);

  WindowKind kind() const { return kind_; }
  double density(double x) const;
  double cdf(double x) const;

  // Draw i uses its own counter substream, so shards of any partition see the
  // same values.
  double sample_one(uint64_t seed, uint64_t index) const;
  std::vector<double> sample(std::size_t count, uint64_t seed) const;

 private:
  explicit Window(WindowKind kind);
  WindowKind kind_;
  double bump_norm_ = 0.0;  // 1 / integral of the unnormalized bump
  double bump_peak_ = 0.0;  // density maximum, for rejection sampling
  std::vector<double> bump_cdf_;  // cumulative on a uniform grid over [1,2]
};

// omega_hat(xi) = integral of omega(x) e^{-2 pi i x xi} dx by adaptive
// quadrature. Throws QuadratureError when the absolute tolerance is missed.
std::complex<double> window_fourier(const Window& window, double xi,
                                    double abs_tol = 1e-10);

}  // namespace annuli
