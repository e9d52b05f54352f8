#pragma once

#include <cstdint>
#include <string>

namespace annuli {

// Exactly representable radius value/2^shift. The boundary predicate
// x^2 + y^2 <= t^2 is decided on 128-bit integers (4^shift * (x^2+y^2) vs
// value^2), so a radius whose square sits next to an integer never
// misclassifies boundary lattice points.
class Dyadic {
 public:
  static constexpr int kDefaultPrecisionBits = 30;

  Dyadic() = default;
  Dyadic(int64_t value, int shift);

  // Decimal text -> nearest dyadic with the given number of fractional bits
  // (ties away from zero). "2.5" parses exactly; "2.1" rounds at 2^-bits.
  static Dyadic from_decimal(const std::string& text,
                             int precision_bits = kDefaultPrecisionBits);
  static Dyadic from_double(double x, int precision_bits = kDefaultPrecisionBits);

  int64_t numerator() const { return value_; }
  int shift() const { return shift_; }
  bool negative() const { return value_ < 0; }
  double to_double() const;  // exact for |value| < 2^53
  int64_t floor() const;     // requires a nonnegative value
  unsigned __int128 square_numerator() const;  // value^2 over denominator 4^shift

  Dyadic operator+(const Dyadic& other) const;
  bool operator==(const Dyadic& other) const = default;
  auto operator<=>(const Dyadic& other) const;

  std::string to_string() const;

 private:
  int64_t value_ = 0;
  int shift_ = 0;  // >= 0; normalized so shift_ == 0 or value_ is odd
};

}  // namespace annuli
