#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace annuli {

// Sieved representation counts r(n) = #{(x,y) in Z^2 : x^2 + y^2 = n} with
// prefix sums of r and r^2. Immutable once built; safe to share across
// threads.
struct RTable {
  uint64_t n_max = 0;
  std::vector<uint32_t> r;        // r[0] = 1 (the origin)
  std::vector<uint64_t> prefix1;  // prefix1[n] = sum_{k=1..n} r(k)
  std::vector<uint64_t> prefix2;  // prefix2[n] = sum_{k=1..n} r(k)^2
};

inline constexpr uint64_t kDefaultSieveBudgetBytes = 3ull << 30;

// Builds the table by walking the lattice grid x^2 + y^2 <= n_max (O(n_max)
// increments). Throws ResourceError when the table would exceed the budget.
RTable build_r_table(uint64_t n_max,
                     uint64_t budget_bytes = kDefaultSieveBudgetBytes);

// Independent oracle: direct enumeration over |x| <= sqrt(n).
uint64_t r_brute(uint64_t n);

// Divisor-formula cross-check: r(n) = 4(d_1(n) - d_3(n)) for n >= 1, where
// d_k counts divisors congruent to k mod 4.
uint64_t r_divisor(uint64_t n);

struct SquarefreeDecomp {
  uint64_t q = 1;  // squarefree kernel
  uint64_t f = 1;  // n = q * f^2
};
SquarefreeDecomp squarefree_kernel(uint64_t n);

struct RamanujanSum {
  uint64_t x = 0;
  uint64_t sum_r_squared = 0;     // sum_{n=1..X} r(n)^2
  double reference = 0.0;         // 4 X log X
  double normalized_error = 0.0;  // (sum - reference) / X
};
// Throws UsageError when x exceeds the table.
RamanujanSum ramanujan_partial_sum(uint64_t x, const RTable& table);

// Binary sieve cache: 8-byte magic, u32 version, u64 n_max, then the raw
// little-endian r/prefix1/prefix2 arrays.
void save_r_table(const RTable& table, const std::string& path);
RTable load_r_table(const std::string& path);

// Loads `cache_path` when it already covers n_max; otherwise builds and, when
// a path was given, rewrites the cache. An empty path always builds fresh.
RTable ensure_r_table(uint64_t n_max, const std::string& cache_path = "",
                      uint64_t budget_bytes = kDefaultSieveBudgetBytes);

}  // namespace annuli
