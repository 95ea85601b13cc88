#include "smallgaps/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

namespace smallgaps {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::uint64_t SieveOptions::default_memory_budget() {
  if (const char* env = std::getenv("SMALLGAPS_MEMORY_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 1) return static_cast<std::uint64_t>(v);
  }
  return std::uint64_t{1} << 28;
}

std::vector<std::uint32_t> small_primes_upto(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<char> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

PrimeTables build_tables(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options,
                         const Exec& exec) {
  if (lo < 1 || lo > hi) throw ArgumentError("build_tables: need 1 <= lo <= hi");
  if (hi >= (std::uint64_t{1} << 32)) throw ArgumentError("build_tables: hi must be below 2^32");
  if (options.segment_length == 0) throw ArgumentError("build_tables: segment_length must be positive");
  const std::uint64_t size = hi - lo + 1;
  if (size > options.max_entries)
    throw BudgetError("build_tables: window of " + std::to_string(size) +
                      " entries exceeds memory budget of " + std::to_string(options.max_entries));

  PrimeTables t;
  t.lo_ = lo;
  t.hi_ = hi;
  t.base_primes_ = small_primes_upto(isqrt(hi));
  t.spf_.assign(size, 0);
  t.bits_.assign((size + 63) / 64, 0);

  // Segments start on multiples of 64 entries so each one owns whole bit words.
  const std::uint64_t seg = (options.segment_length + 63) / 64 * 64;
  const std::uint64_t segments = (size + seg - 1) / seg;
  parallel_for(segments, exec, [&](std::uint64_t s) {
    const std::uint64_t first = lo + s * seg;
    const std::uint64_t last = std::min(hi, first + seg - 1);
    std::uint32_t* spf = t.spf_.data() + (first - lo);
    for (std::uint32_t p : t.base_primes_) {
      const std::uint64_t pp = std::uint64_t{p} * p;
      if (pp > last) break;
      std::uint64_t start = std::max(pp, (first + p - 1) / p * p);
      for (std::uint64_t m = start; m <= last; m += p)
        if (spf[m - first] == 0) spf[m - first] = p;
    }
    for (std::uint64_t n = first; n <= last; ++n) {
      std::uint32_t& entry = spf[n - first];
      if (n == 1) {
        entry = 1;
      } else if (entry == 0) {
        entry = static_cast<std::uint32_t>(n);
        const std::uint64_t i = n - lo;
        t.bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
      }
    }
  });

  t.word_prefix_.assign(t.bits_.size() + 1, 0);
  for (std::size_t w = 0; w < t.bits_.size(); ++w)
    t.word_prefix_[w + 1] = t.word_prefix_[w] + static_cast<std::uint32_t>(std::popcount(t.bits_[w]));
  return t;
}

void PrimeTables::require(std::uint64_t n) const {
  if (n < lo_ || n > hi_)
    throw RangeError(std::to_string(n) + " outside sieved window [" + std::to_string(lo_) + ", " +
                     std::to_string(hi_) + "]");
}

std::uint64_t PrimeTables::trial_factor(std::uint64_t m, std::uint64_t from) const {
  auto it = std::lower_bound(base_primes_.begin(), base_primes_.end(), from);
  for (; it != base_primes_.end(); ++it) {
    const std::uint64_t p = *it;
    if (p * p > m) break;
    if (m % p == 0) return p;
  }
  return m;
}

std::uint64_t PrimeTables::count_through(std::uint64_t x) const {
  if (x < lo_) return 0;
  if (x > hi_) x = hi_;
  const std::uint64_t i = x - lo_;
  const std::uint64_t word = i >> 6;
  const std::uint64_t bit = i & 63;
  const std::uint64_t mask = bit == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (bit + 1)) - 1);
  return word_prefix_[word] + static_cast<std::uint64_t>(std::popcount(bits_[word] & mask));
}

std::uint64_t PrimeTables::next_prime_after(std::uint64_t n) const {
  std::uint64_t m = std::max(n + 1, lo_);
  if (m > hi_) return 0;
  std::uint64_t i = m - lo_;
  std::uint64_t word = i >> 6;
  std::uint64_t bits = bits_[word] & (~std::uint64_t{0} << (i & 63));
  while (bits == 0) {
    if (++word >= bits_.size()) return 0;
    bits = bits_[word];
  }
  const std::uint64_t p = lo_ + word * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
  return p <= hi_ ? p : 0;
}

double theta(std::uint64_t n, const PrimeTables& tables) {
  return tables.is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
}

std::uint64_t pi(std::uint64_t x, const PrimeTables& tables) {
  if (x > tables.hi())
    throw RangeError("pi: x=" + std::to_string(x) + " beyond sieved limit " + std::to_string(tables.hi()));
  return tables.count_through(x);
}

std::vector<std::uint64_t> factor_radical(std::uint64_t n, const PrimeTables& tables) {
  std::vector<std::uint64_t> out;
  tables.for_each_prime_factor(n, ~std::uint64_t{0}, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

}  // namespace smallgaps
