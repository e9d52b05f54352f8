#pragma once

#include <cmath>

#include "annuli/arith.hpp"

namespace annuli {

// J1 to ~1e-12 relative accuracy: power series below the switch point,
// Hankel asymptotic expansion above, both accumulated in long double and
// cross-validated at the switch in tests.
double bessel_j1(double x);

struct SpectralParams {
  double M = 0.0;  // smoothness; series truncate at n <= M
  double L = 0.0;  // inverse annulus width
  double T = 0.0;  // scale of the t-window
  double X = 0.0;  // sharp-series truncation; 0 means default_x(T)

  // L/sqrt(M) <= 0.2 and M <= T keep the experiment inside the regime where
  // the Gaussian limit applies. Throws GuardrailError naming the breach.
  void validate() const;

  static double default_x(double T) { return std::pow(T, 1.8); }
};

// Smoothed count in exact Bessel form:
//   pi t^2 + t sum_{1<=n<=M} r(n) J1(2 pi t sqrt(n)) / sqrt(n) psi_hat(sqrt(n/M)).
double nf_exact_bessel(double t, double M, const RTable& table);

// Asymptotic cosine form:
//   pi t^2 - (sqrt(t)/pi) sum_{n<=M} r(n)/n^{3/4} cos(2 pi t sqrt(n) + pi/4)
//     psi_hat(sqrt(n/M)).
double nf_asymptotic(double t, double M, const RTable& table);

// Smooth remainder sine series; equals
// (Nf(t+1/L) - Nf(t) - 2 pi t/L - pi/L^2)/sqrt(t) up to O(1/t).
double s_smooth(double t, const SpectralParams& params, const RTable& table);

// Truncated explicit formula for the sharp count (no damping).
double n_truncated_explicit(double t, double X, const RTable& table);

// Sharp-remainder sine series truncated at n <= X, without the psi_hat
// damping factor.
double s_sharp_truncated(double t, double L, double X, const RTable& table);

}  // namespace annuli
