#include "annuli/dyadic.hpp"

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <limits>

#include "annuli/errors.hpp"

namespace annuli {

namespace {

constexpr int kMaxPrecisionBits = 60;
constexpr int64_t kMaxIntegerPart = int64_t{1} << 33;

std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

}  // namespace

Dyadic::Dyadic(int64_t value, int shift) : value_(value), shift_(shift) {
  if (shift_ < 0 || shift_ > kMaxPrecisionBits) {
    throw UsageError("dyadic shift out of range");
  }
  while (shift_ > 0 && (value_ & 1) == 0) {
    value_ >>= 1;
    --shift_;
  }
}

Dyadic Dyadic::from_decimal(const std::string& text, int precision_bits) {
  if (precision_bits < 0 || precision_bits > kMaxPrecisionBits) {
    throw UsageError("dyadic precision out of range");
  }
  const char* p = text.c_str();
  bool neg = false;
  if (*p == '+' || *p == '-') {
    neg = (*p == '-');
    ++p;
  }
  if (!std::isdigit(static_cast<unsigned char>(*p))) {
    throw UsageError("malformed decimal number: '" + text + "'");
  }
  unsigned __int128 int_part = 0;
  while (std::isdigit(static_cast<unsigned char>(*p))) {
    int_part = int_part * 10 + static_cast<unsigned>(*p - '0');
    if (int_part > static_cast<unsigned __int128>(kMaxIntegerPart)) {
      throw UsageError("decimal number too large: '" + text + "'");
    }
    ++p;
  }
  unsigned __int128 frac = 0;
  unsigned __int128 denom = 1;
  if (*p == '.') {
    ++p;
    int digits = 0;
    while (std::isdigit(static_cast<unsigned char>(*p))) {
      if (digits < 18) {
        frac = frac * 10 + static_cast<unsigned>(*p - '0');
        denom *= 10;
        ++digits;
      }
      ++p;
    }
    if (digits == 0) throw UsageError("malformed decimal number: '" + text + "'");
  }
  if (*p != '\0') throw UsageError("malformed decimal number: '" + text + "'");

  // round(x * 2^bits) with ties away from zero, all in integer arithmetic
  unsigned __int128 scaled = (int_part * denom + frac) << precision_bits;
  unsigned __int128 v = (scaled + denom / 2) / denom;
  if (v > static_cast<unsigned __int128>(std::numeric_limits<int64_t>::max())) {
    throw UsageError("decimal number too large: '" + text + "'");
  }
  int64_t value = static_cast<int64_t>(v);
  return Dyadic(neg ? -value : value, precision_bits);
}

Dyadic Dyadic::from_double(double x, int precision_bits) {
  if (precision_bits < 0 || precision_bits > kMaxPrecisionBits) {
    throw UsageError("dyadic precision out of range");
  }
  if (!std::isfinite(x) || std::abs(x) > static_cast<double>(kMaxIntegerPart)) {
    throw UsageError("value not representable as a dyadic radius");
  }
  const double scaled = std::ldexp(x, precision_bits);
  return Dyadic(static_cast<int64_t>(std::llround(scaled)), precision_bits);
}

double Dyadic::to_double() const {
  return std::ldexp(static_cast<double>(value_), -shift_);
}

int64_t Dyadic::floor() const {
  if (value_ < 0) throw UsageError("dyadic floor requires a nonnegative value");
  return value_ >> shift_;
}

unsigned __int128 Dyadic::square_numerator() const {
  const unsigned __int128 a =
      value_ < 0 ? static_cast<unsigned __int128>(-static_cast<__int128>(value_))
                 : static_cast<unsigned __int128>(value_);
  return a * a;
}

Dyadic Dyadic::operator+(const Dyadic& other) const {
  const int k = std::max(shift_, other.shift_);
  const __int128 a = static_cast<__int128>(value_) << (k - shift_);
  const __int128 b = static_cast<__int128>(other.value_) << (k - other.shift_);
  const __int128 sum = a + b;
  if (sum > std::numeric_limits<int64_t>::max() ||
      sum < std::numeric_limits<int64_t>::min()) {
    throw UsageError("dyadic addition overflow");
  }
  return Dyadic(static_cast<int64_t>(sum), k);
}

auto Dyadic::operator<=>(const Dyadic& other) const {
  const __int128 a = static_cast<__int128>(value_) << other.shift_;
  const __int128 b = static_cast<__int128>(other.value_) << shift_;
  return a <=> b;
}

std::string Dyadic::to_string() const {
  const bool neg = value_ < 0;
  const uint64_t mag = neg ? static_cast<uint64_t>(-value_) : static_cast<uint64_t>(value_);
  const uint64_t ip = mag >> shift_;
  uint64_t frac = mag - (ip << shift_);
  std::string s = (neg ? "-" : "") + std::to_string(ip);
  if (frac != 0) {
    // exact decimal expansion: frac / 2^k = frac * 5^k / 10^k
    unsigned __int128 num = frac;
    for (int i = 0; i < shift_; ++i) num *= 5;
    std::string digits = u128_to_string(num);
    if (static_cast<int>(digits.size()) < shift_) {
      digits.insert(0, shift_ - digits.size(), '0');
    }
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    s += "." + digits;
  }
  return s;
}

}  // namespace annuli
