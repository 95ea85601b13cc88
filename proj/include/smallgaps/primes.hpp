#pragma once

// Segmented prime tables over a window [lo, hi]: primality bits,
// smallest-prime-factor entries, prefix prime counts and the base primes
// up to sqrt(hi).

#include <cstdint>
#include <span>
#include <vector>

#include "smallgaps/errors.hpp"
#include "smallgaps/parallel.hpp"

namespace smallgaps {

struct SieveOptions {
  // Entries sieved per segment.
  std::uint64_t segment_length = std::uint64_t{1} << 20;
  // Largest admissible window (hi - lo + 1); SMALLGAPS_MEMORY_BUDGET
  // overrides the default.
  std::uint64_t max_entries = default_memory_budget();

  static std::uint64_t default_memory_budget();
};

class PrimeTables {
 public:
  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  bool contains(std::uint64_t n) const { return n >= lo_ && n <= hi_; }

  bool is_prime(std::uint64_t n) const {
    require(n);
    return is_prime_unchecked(n);
  }
  bool is_prime_unchecked(std::uint64_t n) const {
    const std::uint64_t i = n - lo_;
    return (bits_[i >> 6] >> (i & 63)) & 1u;
  }

  // Smallest prime factor of n; 1 for n == 1.
  std::uint32_t smallest_factor(std::uint64_t n) const {
    require(n);
    return spf_[n - lo_];
  }
  std::uint32_t smallest_factor_unchecked(std::uint64_t n) const { return spf_[n - lo_]; }

  // Number of primes p with lo <= p <= x (0 when x < lo).
  std::uint64_t count_through(std::uint64_t x) const;

  // Smallest prime > n inside the window, or 0 if none.
  std::uint64_t next_prime_after(std::uint64_t n) const;

  std::span<const std::uint32_t> base_primes() const { return base_primes_; }
  std::span<const std::uint32_t> spf() const { return spf_; }
  std::span<const std::uint64_t> prime_bits() const { return bits_; }

  // Calls f(p) for each distinct prime p <= limit dividing n, ascending.
  template <class F>
  void for_each_prime_factor(std::uint64_t n, std::uint64_t limit, F&& f) const {
    require(n);
    std::uint64_t m = n;
    std::uint64_t last = 1;
    while (m > 1) {
      std::uint64_t p = (m >= lo_) ? spf_[m - lo_] : trial_factor(m, last);
      if (p > limit) return;
      f(p);
      do m /= p;
      while (m % p == 0);
      last = p;
    }
  }

 private:
  friend PrimeTables build_tables(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options,
                                  const Exec& exec);

  void require(std::uint64_t n) const;
  std::uint64_t trial_factor(std::uint64_t m, std::uint64_t from) const;

  std::uint64_t lo_ = 1;
  std::uint64_t hi_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> word_prefix_;  // primes in words [0, w)
  std::vector<std::uint32_t> base_primes_;
};

// Sieves [lo, hi]. Requires 1 <= lo <= hi < 2^32 and a window within the
// memory budget (BudgetError otherwise). Deterministic; the result does not
// depend on segment_length or exec.
PrimeTables build_tables(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options = {},
                         const Exec& exec = {});

// Chebyshev weight: log n for prime n, 0 otherwise.
double theta(std::uint64_t n, const PrimeTables& tables);

// Primes p <= x with p >= lo; the full prime-counting function when lo <= 2.
std::uint64_t pi(std::uint64_t x, const PrimeTables& tables);

// Distinct prime divisors of n, ascending; empty for n == 1.
std::vector<std::uint64_t> factor_radical(std::uint64_t n, const PrimeTables& tables);

// Primes <= limit by a plain sieve; used for small auxiliary prime lists.
std::vector<std::uint32_t> small_primes_upto(std::uint64_t limit);

bool is_prime_trial(std::uint64_t n);

}  // namespace smallgaps
