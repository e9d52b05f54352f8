#include "annuli/counting.hpp"

#include <cmath>

#include "annuli/errors.hpp"
#include "annuli/numeric.hpp"

namespace annuli {

AnnulusSpec AnnulusSpec::from_width_parameter(const Dyadic& t, double L,
                                              int precision_bits) {
  if (L <= 1.0) throw UsageError("annulus width parameter L must exceed 1");
  return AnnulusSpec{t, Dyadic::from_double(1.0 / L, precision_bits)};
}

double AnnulusSpec::width_inverse() const { return 1.0 / rho.to_double(); }

uint64_t lattice_count_rows(const Dyadic& t) {
  if (t.negative()) throw UsageError("lattice_count_rows requires t >= 0");
  const int k = t.shift();
  const unsigned __int128 t2 = t.square_numerator();  // t^2 * 4^k
  const int64_t xmax = t.floor();
  uint64_t total = 0;
  for (int64_t x = 0; x <= xmax; ++x) {
    // count y: (y 2^k)^2 <= t^2 4^k - (x 2^k)^2
    const unsigned __int128 xs = static_cast<unsigned __int128>(x) << k;
    const unsigned __int128 rem = t2 - xs * xs;
    const uint64_t ymax = static_cast<uint64_t>(isqrt_u128(rem)) >> k;
    const uint64_t column = 2 * ymax + 1;
    total += (x == 0) ? column : 2 * column;
  }
  return total;
}

uint64_t lattice_count_prefix(const Dyadic& t, const RTable& table) {
  if (t.negative()) throw UsageError("lattice_count_prefix requires t >= 0");
  const unsigned __int128 floor_t2 = t.square_numerator() >> (2 * t.shift());
  if (floor_t2 > table.n_max) {
    throw UsageError("lattice_count_prefix: t^2 exceeds table n_max=" +
                     std::to_string(table.n_max));
  }
  return 1 + table.prefix1[static_cast<uint64_t>(floor_t2)];
}

double s_sharp(const AnnulusSpec& spec) {
  if (spec.t.to_double() < 1.0) throw UsageError("s_sharp requires t >= 1");
  const uint64_t inner = lattice_count_rows(spec.t);
  const uint64_t outer = lattice_count_rows(spec.t + spec.rho);
  const double t = spec.t.to_double();
  const double rho = spec.rho.to_double();
  const double area = M_PI * (2.0 * t * rho + rho * rho);
  return (static_cast<double>(outer - inner) - area) / std::sqrt(t);
}

}  // namespace annuli
