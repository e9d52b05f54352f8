#include "annuli/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace annuli {

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t s = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (s > 0 && static_cast<unsigned __int128>(s) * s > n) --s;
  while (static_cast<unsigned __int128>(s + 1) * (s + 1) <= n) ++s;
  return s;
}

unsigned __int128 isqrt_u128(unsigned __int128 n) {
  if (n == 0) return 0;
  constexpr uint64_t kMaxRoot = std::numeric_limits<uint64_t>::max();
  unsigned __int128 s =
      static_cast<unsigned __int128>(sqrtl(static_cast<long double>(n)));
  if (s > kMaxRoot) s = kMaxRoot;
  while (s > 0 && s * s > n) --s;
  while (s < kMaxRoot && (s + 1) * (s + 1) <= n) ++s;
  return s;
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights (positive half; node 7 is the center).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double kronrod;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b,
                 long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  evals += 15;
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  resk += kWgk[7] * fv[7];
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  resg += kWg[3] * fv[7];
  return {resk * h, std::abs(resk - resg) * h};
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol, int depth, double& total, double& err, long& evals) {
  PanelResult p = gk15(f, a, b, evals);
  if (p.error <= tol || depth <= 0) {
    total += p.kronrod;
    err += p.error;
    return;
  }
  const double c = 0.5 * (a + b);
  adapt(f, a, c, 0.5 * tol, depth - 1, total, err, evals);
  adapt(f, c, b, 0.5 * tol, depth - 1, total, err, evals);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, int initial_panels,
                           int max_depth) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const int panels = std::clamp(initial_panels, 1, 1 << 20);
  const double w = (b - a) / panels;
  double total = 0.0, err = 0.0;
  for (int i = 0; i < panels; ++i) {
    adapt(f, a + i * w, a + (i + 1) * w, abs_tol / panels, max_depth, total,
          err, out.evaluations);
  }
  out.value = total;
  out.error_estimate = err;
  out.converged = err <= abs_tol;
  return out;
}

}  // namespace annuli
