#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace annuli {

// Sign pattern over m terms: bit j set means epsilon_j = -1.
using SignPattern = uint32_t;

inline int pattern_sign(SignPattern p, std::size_t j) {
  return (p >> j) & 1u ? -1 : +1;
}

// Exact vanishing decision by squarefree-kernel grouping: the signed sum
// vanishes iff every kernel block has integer relation sum eps_j f_j = 0.
// Sound and complete because square roots of distinct squarefree integers are
// linearly independent over the rationals.
bool pattern_vanishes(const std::vector<uint64_t>& n, SignPattern p);
std::vector<SignPattern> vanishing_patterns(const std::vector<uint64_t>& n);

// 1 / (m sqrt(max_n))^(2^{m-1} - 1)
double liouville_lower_bound(std::size_t m, uint64_t max_n);

// Signed sum of square roots with a certified enclosure. Refining the
// precision only shrinks the interval; vanishing is decided exactly by the
// kernel criterion, never by interval width.
struct SignedSqrtSum {
  std::vector<uint64_t> n;
  std::vector<int> eps;
  double lo = 0.0;
  double hi = 0.0;
  int precision_bits = 0;
  bool vanishes = false;
};
SignedSqrtSum evaluate_signed_sqrt_sum(const std::vector<uint64_t>& n,
                                       const std::vector<int>& eps,
                                       int precision_bits = 128);

struct PatternBound {
  SignPattern pattern = 0;
  double certified_lower = 0.0;  // lower bound on |sum eps sqrt(n)|
};

struct LiouvilleCertificate {
  std::vector<uint64_t> n;
  std::string p_integer;     // full Galois product, exact decimal
  bool p_nonzero = false;
  bool p_is_square = false;  // P = Q^2 for m >= 2 (P = 0 counts, 0 = 0^2)
  bool p_at_least_one = false;  // |P| >= 1 whenever nothing vanishes
  double min_abs = 0.0;  // certified lower bound over nonvanishing patterns
  double bound = 0.0;    // 1/(m sqrt(max_n))^{2^{m-1}-1}
  uint64_t max_n = 0;
  int precision_bits = 0;  // precision at which the certificate closed
  std::vector<SignPattern> vanishing;
  std::vector<PatternBound> pattern_bounds;
  bool meets_bound = false;  // min_abs >= bound
};

// Computes the Galois product P over all 2^m sign patterns in interval
// arithmetic, doubling precision (128 up to 8192 bits) until the enclosure
// isolates exactly one integer, and certifies a positive lower bound for
// every nonvanishing pattern. m <= 6.
LiouvilleCertificate liouville_certificate(const std::vector<uint64_t>& n);

struct SweepReport {
  std::size_t m = 0;
  uint64_t max_n = 0;
  uint64_t tuples = 0;
  uint64_t patterns_checked = 0;
  uint64_t vanishing = 0;
  bool all_pass = false;
  double tightest_ratio = 0.0;  // min over nonvanishing of |sum| / bound
  std::vector<uint64_t> tightest_tuple;
};

// Every multiset {n_1 <= ... <= n_m <= max_n} and every nonvanishing sign
// pattern must meet the Liouville bound. m <= 4, max_n <= 50.
SweepReport exhaustive_bound_sweep(uint64_t max_n, std::size_t m);

struct KernelBlock {
  uint64_t q = 1;                    // shared squarefree kernel
  std::vector<std::size_t> indices;  // positions j with kernel q
  std::vector<int64_t> signed_f;     // eps_j f_j, summing to zero
};

// Partition witnessing sum eps_j sqrt(n_j) = 0. Throws NotVanishingError
// naming the first kernel whose relation fails.
std::vector<KernelBlock> diagonal_partition(const std::vector<uint64_t>& n,
                                            const std::vector<int>& eps);

}  // namespace annuli
