#include "annuli/arith.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "annuli/errors.hpp"
#include "annuli/numeric.hpp"

namespace annuli {

namespace {

constexpr char kCacheMagic[8] = {'A', 'N', 'N', 'U', 'L', 'I', 'R', '1'};
constexpr uint32_t kCacheVersion = 1;

uint64_t checked_add(uint64_t a, uint64_t b) {
  uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ResourceError("prefix sum overflows 64 bits");
  }
  return out;
}

}  // namespace

RTable build_r_table(uint64_t n_max, uint64_t budget_bytes) {
  const uint64_t entries = n_max + 1;
  const uint64_t bytes = entries * (sizeof(uint32_t) + 2 * sizeof(uint64_t));
  if (bytes > budget_bytes) {
    throw ResourceError("sieve of size n_max=" + std::to_string(n_max) +
                        " needs " + std::to_string(bytes) +
                        " bytes, over the budget of " +
                        std::to_string(budget_bytes));
  }

  RTable t;
  t.n_max = n_max;
  t.r.assign(entries, 0);
  t.r[0] = 1;
  const uint64_t s = isqrt_u64(n_max);
  for (uint64_t x = 1; x <= s; ++x) t.r[x * x] += 4;  // (+-x,0),(0,+-x)
  for (uint64_t x = 1; x <= s; ++x) {
    const uint64_t x2 = x * x;
    const uint64_t ymax = isqrt_u64(n_max - x2);
    for (uint64_t y = 1; y <= ymax; ++y) t.r[x2 + y * y] += 4;  // sign choices
  }

  t.prefix1.assign(entries, 0);
  t.prefix2.assign(entries, 0);
  for (uint64_t n = 1; n <= n_max; ++n) {
    const uint64_t rn = t.r[n];
    t.prefix1[n] = checked_add(t.prefix1[n - 1], rn);
    t.prefix2[n] = checked_add(t.prefix2[n - 1], rn * rn);
  }
  return t;
}

uint64_t r_brute(uint64_t n) {
  const uint64_t s = isqrt_u64(n);
  uint64_t count = 0;
  for (uint64_t x = 0; x <= s; ++x) {
    const uint64_t rem = n - x * x;
    const uint64_t y = isqrt_u64(rem);
    if (y * y != rem) continue;
    const uint64_t mx = (x == 0) ? 1 : 2;
    const uint64_t my = (y == 0) ? 1 : 2;
    count += mx * my;
  }
  return count;
}

uint64_t r_divisor(uint64_t n) {
  if (n == 0) return 1;
  int64_t diff = 0;  // d_1(n) - d_3(n)
  for (uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    const uint64_t q = n / d;
    if (d % 4 == 1) ++diff;
    else if (d % 4 == 3) --diff;
    if (q != d) {
      if (q % 4 == 1) ++diff;
      else if (q % 4 == 3) --diff;
    }
  }
  return static_cast<uint64_t>(4 * diff);
}

SquarefreeDecomp squarefree_kernel(uint64_t n) {
  if (n == 0) throw UsageError("squarefree_kernel requires n >= 1");
  SquarefreeDecomp out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) out.f *= d;
    if (e % 2) out.q *= d;
  }
  if (n > 1) out.q *= n;
  return out;
}

RamanujanSum ramanujan_partial_sum(uint64_t x, const RTable& table) {
  if (x > table.n_max) {
    throw UsageError("ramanujan_partial_sum: X=" + std::to_string(x) +
                     " exceeds table n_max=" + std::to_string(table.n_max));
  }
  RamanujanSum out;
  out.x = x;
  out.sum_r_squared = table.prefix2[x];
  out.reference = x > 0 ? 4.0 * static_cast<double>(x) * std::log(static_cast<double>(x)) : 0.0;
  out.normalized_error =
      x > 0 ? (static_cast<double>(out.sum_r_squared) - out.reference) / static_cast<double>(x) : 0.0;
  return out;
}

void save_r_table(const RTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ResourceError("cannot open sieve cache for writing: " + path);
  f.write(kCacheMagic, sizeof(kCacheMagic));
  f.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof(kCacheVersion));
  f.write(reinterpret_cast<const char*>(&table.n_max), sizeof(table.n_max));
  f.write(reinterpret_cast<const char*>(table.r.data()),
          static_cast<std::streamsize>(table.r.size() * sizeof(uint32_t)));
  f.write(reinterpret_cast<const char*>(table.prefix1.data()),
          static_cast<std::streamsize>(table.prefix1.size() * sizeof(uint64_t)));
  f.write(reinterpret_cast<const char*>(table.prefix2.data()),
          static_cast<std::streamsize>(table.prefix2.size() * sizeof(uint64_t)));
  if (!f) throw ResourceError("failed writing sieve cache: " + path);
}

RTable load_r_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot open sieve cache: " + path);
  char magic[8];
  uint32_t version = 0;
  RTable t;
  f.read(magic, sizeof(magic));
  f.read(reinterpret_cast<char*>(&version), sizeof(version));
  f.read(reinterpret_cast<char*>(&t.n_max), sizeof(t.n_max));
  if (!f || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0 ||
      version != kCacheVersion) {
    throw ResourceError("sieve cache has wrong magic or version: " + path);
  }
  const uint64_t entries = t.n_max + 1;
  t.r.resize(entries);
  t.prefix1.resize(entries);
  t.prefix2.resize(entries);
  f.read(reinterpret_cast<char*>(t.r.data()),
         static_cast<std::streamsize>(entries * sizeof(uint32_t)));
  f.read(reinterpret_cast<char*>(t.prefix1.data()),
         static_cast<std::streamsize>(entries * sizeof(uint64_t)));
  f.read(reinterpret_cast<char*>(t.prefix2.data()),
         static_cast<std::streamsize>(entries * sizeof(uint64_t)));
  if (!f) throw ResourceError("sieve cache truncated: " + path);
  return t;
}

RTable ensure_r_table(uint64_t n_max, const std::string& cache_path,
                      uint64_t budget_bytes) {
  if (!cache_path.empty()) {
    if (std::ifstream probe(cache_path, std::ios::binary); probe.good()) {
      RTable t = load_r_table(cache_path);
      if (t.n_max >= n_max) return t;
    }
  }
  RTable t = build_r_table(n_max, budget_bytes);
  if (!cache_path.empty()) save_r_table(t, cache_path);
  return t;
}

}  // namespace annuli
