#pragma once

#include <cstdint>

#include "annuli/arith.hpp"
#include "annuli/dyadic.hpp"

namespace annuli {

// Annulus of inner radius t and width rho. The width is frozen per experiment
// (rho = nearest dyadic to 1/L), so t + rho stays exactly dyadic.
struct AnnulusSpec {
  Dyadic t;
  Dyadic rho;

  static AnnulusSpec from_width_parameter(
      const Dyadic& t, double L,
      int precision_bits = Dyadic::kDefaultPrecisionBits);

  double width_inverse() const;  // the L actually realized by the dyadic rho
};

// N(t) over columns: sum over |x| <= floor(t) of the exact count of y with
// x^2 + y^2 <= t^2, decided in 128-bit integer arithmetic. O(t) time.
uint64_t lattice_count_rows(const Dyadic& t);

// N(t) = 1 + prefix1[floor(t^2)]; must agree with lattice_count_rows always.
// Throws UsageError when t^2 exceeds the table.
uint64_t lattice_count_prefix(const Dyadic& t, const RTable& table);

// S(t, rho) = (N(t+rho) - N(t) - pi(2 t rho + rho^2)) / sqrt(t).
double s_sharp(const AnnulusSpec& spec);

}  // namespace annuli
