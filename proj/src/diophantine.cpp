#include "annuli/diophantine.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "annuli/arith.hpp"
#include "annuli/errors.hpp"

namespace annuli {

namespace {

constexpr int kStartPrecision = 128;
constexpr int kMaxPrecision = 8192;

// Closed interval [lo, hi] with outward rounding at a fixed precision.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  Interval(const Interval& other) {
    mpfr_init2(lo_, mpfr_get_prec(other.lo_));
    mpfr_init2(hi_, mpfr_get_prec(other.hi_));
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  Interval& operator=(const Interval&) = delete;
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  void set_ui(unsigned long v) {
    mpfr_set_ui(lo_, v, MPFR_RNDD);
    mpfr_set_ui(hi_, v, MPFR_RNDU);
  }

  void add_signed_sqrt(uint64_t n, int sign) {
    mpfr_t root_lo, root_hi;
    mpfr_init2(root_lo, mpfr_get_prec(lo_));
    mpfr_init2(root_hi, mpfr_get_prec(hi_));
    mpfr_sqrt_ui(root_lo, n, MPFR_RNDD);
    mpfr_sqrt_ui(root_hi, n, MPFR_RNDU);
    if (sign > 0) {
      mpfr_add(lo_, lo_, root_lo, MPFR_RNDD);
      mpfr_add(hi_, hi_, root_hi, MPFR_RNDU);
    } else {
      mpfr_sub(lo_, lo_, root_hi, MPFR_RNDD);
      mpfr_sub(hi_, hi_, root_lo, MPFR_RNDU);
    }
    mpfr_clear(root_lo);
    mpfr_clear(root_hi);
  }

  void mul(const Interval& other) {
    const mpfr_prec_t prec = mpfr_get_prec(lo_);
    mpfr_t best_lo, best_hi, tmp;
    mpfr_init2(best_lo, prec);
    mpfr_init2(best_hi, prec);
    mpfr_init2(tmp, prec);
    bool first = true;
    const mpfr_t* a[2] = {&lo_, &hi_};
    const mpfr_t* b[2] = {&other.lo_, &other.hi_};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        mpfr_mul(tmp, *a[i], *b[j], MPFR_RNDD);
        if (first || mpfr_cmp(tmp, best_lo) < 0) mpfr_set(best_lo, tmp, MPFR_RNDD);
        mpfr_mul(tmp, *a[i], *b[j], MPFR_RNDU);
        if (first || mpfr_cmp(tmp, best_hi) > 0) mpfr_set(best_hi, tmp, MPFR_RNDU);
        first = false;
      }
    }
    mpfr_set(lo_, best_lo, MPFR_RNDD);
    mpfr_set(hi_, best_hi, MPFR_RNDU);
    mpfr_clear(best_lo);
    mpfr_clear(best_hi);
    mpfr_clear(tmp);
  }

  bool excludes_zero() const {
    return mpfr_sgn(lo_) > 0 || mpfr_sgn(hi_) < 0;
  }
  bool contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
  }

  // Certified lower bound on |x| for x in the interval (0 when it straddles).
  double abs_lower() const {
    if (mpfr_sgn(lo_) > 0) return mpfr_get_d(lo_, MPFR_RNDD);
    if (mpfr_sgn(hi_) < 0) {
      mpfr_t t;
      mpfr_init2(t, mpfr_get_prec(hi_));
      mpfr_neg(t, hi_, MPFR_RNDD);
      const double v = mpfr_get_d(t, MPFR_RNDD);
      mpfr_clear(t);
      return v;
    }
    return 0.0;
  }

  // True when [lo, hi] contains exactly one integer; writes it to out.
  bool isolates_integer(mpz_t out) const {
    mpz_t a, b;
    mpz_init(a);
    mpz_init(b);
    mpfr_get_z(a, lo_, MPFR_RNDU);  // ceil(lo)
    mpfr_get_z(b, hi_, MPFR_RNDD);  // floor(hi)
    const bool unique = mpz_cmp(a, b) == 0;
    if (unique) mpz_set(out, a);
    mpz_clear(a);
    mpz_clear(b);
    return unique;
  }

  double width() const {
    mpfr_t w;
    mpfr_init2(w, mpfr_get_prec(hi_));
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const double v = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return v;
  }

  double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

 private:
  mpfr_t lo_, hi_;
};

Interval pattern_interval(const std::vector<uint64_t>& n, SignPattern p,
                          mpfr_prec_t prec) {
  Interval sum(prec);
  for (std::size_t j = 0; j < n.size(); ++j) {
    sum.add_signed_sqrt(n[j], pattern_sign(p, j));
  }
  return sum;
}

std::string mpz_to_string(const mpz_t z) {
  char* raw = mpz_get_str(nullptr, 10, z);
  std::string s(raw);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(raw, s.size() + 1);
  return s;
}

}  // namespace

bool pattern_vanishes(const std::vector<uint64_t>& n, SignPattern p) {
  std::map<uint64_t, int64_t> kernel_sums;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const SquarefreeDecomp d = squarefree_kernel(n[j]);
    kernel_sums[d.q] += pattern_sign(p, j) * static_cast<int64_t>(d.f);
  }
  return std::all_of(kernel_sums.begin(), kernel_sums.end(),
                     [](const auto& kv) { return kv.second == 0; });
}

std::vector<SignPattern> vanishing_patterns(const std::vector<uint64_t>& n) {
  const std::size_t m = n.size();
  if (m < 1 || m > 8) {
    throw UsageError("vanishing_patterns supports 1 <= m <= 8, got m=" +
                     std::to_string(m));
  }
  for (uint64_t v : n) {
    if (v < 1) throw UsageError("entries must be positive integers");
  }
  std::vector<SignPattern> out;
  for (SignPattern p = 0; p < (1u << m); ++p) {
    if (pattern_vanishes(n, p)) out.push_back(p);
  }
  return out;
}

double liouville_lower_bound(std::size_t m, uint64_t max_n) {
  const double base = static_cast<double>(m) * std::sqrt(static_cast<double>(max_n));
  const double exponent = std::pow(2.0, static_cast<double>(m) - 1.0) - 1.0;
  return std::pow(base, -exponent);
}

SignedSqrtSum evaluate_signed_sqrt_sum(const std::vector<uint64_t>& n,
                                       const std::vector<int>& eps,
                                       int precision_bits) {
  if (n.size() != eps.size() || n.empty()) {
    throw UsageError("signed sqrt sum needs matching nonempty n and eps");
  }
  if (precision_bits < 16 || precision_bits > kMaxPrecision) {
    throw UsageError("signed sqrt sum precision out of range");
  }
  SignPattern p = 0;
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (eps[j] != 1 && eps[j] != -1) throw UsageError("signs must be +-1");
    if (eps[j] < 0) p |= 1u << j;
  }
  Interval sum(precision_bits);
  for (std::size_t j = 0; j < n.size(); ++j) sum.add_signed_sqrt(n[j], eps[j]);

  SignedSqrtSum out;
  out.n = n;
  out.eps = eps;
  out.precision_bits = precision_bits;
  out.vanishes = pattern_vanishes(n, p);
  out.lo = sum.lo_double();
  out.hi = sum.hi_double();
  return out;
}

LiouvilleCertificate liouville_certificate(const std::vector<uint64_t>& n) {
  const std::size_t m = n.size();
  if (m < 1 || m > 6) {
    throw UsageError("liouville_certificate supports 1 <= m <= 6, got m=" +
                     std::to_string(m));
  }
  LiouvilleCertificate cert;
  cert.n = n;
  cert.max_n = *std::max_element(n.begin(), n.end());
  cert.bound = liouville_lower_bound(m, cert.max_n);
  cert.vanishing = vanishing_patterns(n);

  const SignPattern npat = 1u << m;
  mpz_t p_int;
  mpz_init(p_int);
  bool done = false;
  for (int prec = kStartPrecision; prec <= kMaxPrecision && !done; prec *= 2) {
    std::vector<Interval> sums;
    sums.reserve(npat);
    bool all_resolved = true;
    for (SignPattern p = 0; p < npat; ++p) {
      sums.emplace_back(pattern_interval(n, p, prec));
      if (!pattern_vanishes(n, p) && !sums.back().excludes_zero()) {
        all_resolved = false;
      }
    }
    if (!all_resolved) continue;

    Interval product(prec);
    product.set_ui(1);
    for (const Interval& s : sums) product.mul(s);
    if (product.width() >= 1.0 || !product.isolates_integer(p_int)) continue;

    cert.precision_bits = prec;
    cert.min_abs = std::numeric_limits<double>::infinity();
    cert.pattern_bounds.clear();
    for (SignPattern p = 0; p < npat; ++p) {
      if (pattern_vanishes(n, p)) continue;
      const double lower = sums[p].abs_lower();
      cert.pattern_bounds.push_back({p, lower});
      cert.min_abs = std::min(cert.min_abs, lower);
    }
    if (cert.pattern_bounds.empty()) cert.min_abs = 0.0;
    done = true;
  }
  if (!done) {
    mpz_clear(p_int);
    throw PrecisionExhaustionError(
        "liouville_certificate: interval did not isolate an integer at " +
        std::to_string(kMaxPrecision) +
        " bits; the Galois product is provably an integer, so this is a bug");
  }

  cert.p_integer = mpz_to_string(p_int);
  cert.p_nonzero = mpz_sgn(p_int) != 0;
  cert.p_at_least_one = !cert.p_nonzero || mpz_cmpabs_ui(p_int, 1) >= 0;
  if (m >= 2) {
    // P = (-1)^{2^{m-1}} Q^2 = Q^2, so P must be a nonnegative perfect square.
    cert.p_is_square = mpz_sgn(p_int) >= 0 && mpz_perfect_square_p(p_int) != 0;
  } else {
    cert.p_is_square = true;  // m = 1: P = -n by construction, no square claim
  }
  cert.meets_bound = cert.pattern_bounds.empty() || cert.min_abs >= cert.bound;

  // Consistency between the exact vanishing decision and the product.
  if (cert.vanishing.empty() != cert.p_nonzero) {
    mpz_clear(p_int);
    throw PrecisionExhaustionError(
        "liouville_certificate: kernel vanishing decision disagrees with the "
        "certified product");
  }
  mpz_clear(p_int);
  return cert;
}

SweepReport exhaustive_bound_sweep(uint64_t max_n, std::size_t m) {
  if (m < 1 || m > 4) throw UsageError("exhaustive sweep supports m <= 4");
  if (max_n < 1 || max_n > 50) throw UsageError("exhaustive sweep supports max_n <= 50");

  SweepReport rep;
  rep.m = m;
  rep.max_n = max_n;
  rep.all_pass = true;
  rep.tightest_ratio = std::numeric_limits<double>::infinity();
  const double bound = liouville_lower_bound(m, max_n);

  std::vector<uint64_t> tuple(m, 1);
  // Precompute kernels once.
  std::vector<SquarefreeDecomp> kernels(max_n + 1);
  for (uint64_t v = 1; v <= max_n; ++v) kernels[v] = squarefree_kernel(v);

  const auto check_tuple = [&](const std::vector<uint64_t>& t) {
    ++rep.tuples;
    for (SignPattern p = 0; p < (1u << m); ++p) {
      ++rep.patterns_checked;
      // kernel-grouped vanishing decision
      std::map<uint64_t, int64_t> sums;
      for (std::size_t j = 0; j < m; ++j) {
        const auto& d = kernels[t[j]];
        sums[d.q] += pattern_sign(p, j) * static_cast<int64_t>(d.f);
      }
      bool vanish = true;
      for (const auto& kv : sums) {
        if (kv.second != 0) {
          vanish = false;
          break;
        }
      }
      if (vanish) {
        ++rep.vanishing;
        continue;
      }
      double v = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        v += pattern_sign(p, j) * std::sqrt(static_cast<double>(t[j]));
      }
      v = std::abs(v);
      if (v < bound * 1.5) {
        // close call: certify with interval arithmetic
        std::vector<int> eps(m);
        Interval sum(256);
        for (std::size_t j = 0; j < m; ++j) {
          sum.add_signed_sqrt(t[j], pattern_sign(p, j));
        }
        if (sum.abs_lower() < bound) rep.all_pass = false;
      }
      const double ratio = v / bound;
      if (ratio < rep.tightest_ratio) {
        rep.tightest_ratio = ratio;
        rep.tightest_tuple = t;
      }
    }
  };

  // multisets n_1 <= n_2 <= ... <= n_m
  const std::function<void(std::size_t, uint64_t)> rec = [&](std::size_t depth,
                                                             uint64_t from) {
    if (depth == m) {
      check_tuple(tuple);
      return;
    }
    for (uint64_t v = from; v <= max_n; ++v) {
      tuple[depth] = v;
      rec(depth + 1, v);
    }
  };
  rec(0, 1);
  return rep;
}

std::vector<KernelBlock> diagonal_partition(const std::vector<uint64_t>& n,
                                            const std::vector<int>& eps) {
  if (n.size() != eps.size() || n.empty()) {
    throw UsageError("diagonal_partition needs matching nonempty n and eps");
  }
  std::map<uint64_t, KernelBlock> blocks;
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (eps[j] != 1 && eps[j] != -1) throw UsageError("signs must be +-1");
    const SquarefreeDecomp d = squarefree_kernel(n[j]);
    KernelBlock& b = blocks[d.q];
    b.q = d.q;
    b.indices.push_back(j);
    b.signed_f.push_back(eps[j] * static_cast<int64_t>(d.f));
  }
  std::vector<KernelBlock> out;
  for (auto& [q, b] : blocks) {
    int64_t sum = 0;
    for (int64_t v : b.signed_f) sum += v;
    if (sum != 0) {
      throw NotVanishingError(
          "signed sum does not vanish: kernel q=" + std::to_string(q) +
          " has relation sum " + std::to_string(sum) + " != 0");
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace annuli
