#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "smallgaps/primes.hpp"
#include "smallgaps/tuples.hpp"

namespace smallgaps {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0, carry = 0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double total() const { return sum + carry; }
};

// zeta(s) - 1 for s >= 2: direct terms below J plus Euler-Maclaurin tail.
double zeta_minus_one(double s) {
  constexpr int J = 20;
  // B_2i / (2i)!
  constexpr std::array<double, 8> kBernoulliOverFactorial = {
      1.0 / 12.0,          -1.0 / 720.0,          1.0 / 30240.0,          -1.0 / 1209600.0,
      1.0 / 47900160.0,    -691.0 / 1307674368000.0, 1.0 / 74724249600.0, -3617.0 / 10670622842880000.0};
  const double j = J;
  double tail = std::pow(j, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(j, -s);
  double rising = s;  // s (s+1) ... (s+2i-2)
  for (std::size_t i = 0; i < kBernoulliOverFactorial.size(); ++i) {
    const double two_i = 2.0 * static_cast<double>(i + 1);
    tail += kBernoulliOverFactorial[i] * rising * std::pow(j, -s - two_i + 1.0);
    rising *= (s + two_i - 1.0) * (s + two_i);
  }
  double sum = tail;
  for (int n = J - 1; n >= 2; --n) sum += std::pow(static_cast<double>(n), -s);
  return sum;
}

int mobius_small(int n) {
  int mu = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

// Primes up to a cutoff with their negative power sums and, per k, suffix
// sums of log((1 - k/p)(1 - 1/p)^-k).
struct PrimeBlock {
  std::uint64_t cutoff = 0;
  std::vector<std::uint32_t> primes;
  std::map<int, double> power_sums;
  std::map<int, std::vector<double>> suffix;
  std::mutex mutex;

  double power_sum(int m) {
    std::lock_guard lock(mutex);
    auto it = power_sums.find(m);
    if (it != power_sums.end()) return it->second;
    CompensatedSum s;
    for (auto p = primes.rbegin(); p != primes.rend(); ++p) s.add(std::pow(static_cast<double>(*p), -m));
    return power_sums[m] = s.total();
  }

  // suffix[i] = sum over primes[i..] of g_k(p); entries with p <= k are zero.
  const std::vector<double>& suffix_for(int k) {
    std::lock_guard lock(mutex);
    auto it = suffix.find(k);
    if (it != suffix.end()) return it->second;
    std::vector<double> out(primes.size() + 1, 0.0);
    CompensatedSum s;
    for (std::size_t i = primes.size(); i-- > 0;) {
      const double p = primes[i];
      if (p > k) s.add(std::log1p(-k / p) - k * std::log1p(-1.0 / p));
      out[i] = s.total();
    }
    return suffix[k] = std::move(out);
  }
};

std::shared_ptr<PrimeBlock> block_for(std::uint64_t cutoff) {
  static std::mutex mutex;
  static std::map<std::uint64_t, std::shared_ptr<PrimeBlock>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[cutoff];
  if (!slot) {
    slot = std::make_shared<PrimeBlock>();
    slot->cutoff = cutoff;
    slot->primes = small_primes_upto(cutoff);
  }
  return slot;
}

}  // namespace

double prime_zeta(int s) {
  if (s < 2) throw ArgumentError("prime_zeta: s must be >= 2");
  static std::mutex mutex;
  static std::map<int, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(s); it != cache.end()) return it->second;
  }
  // P(s) = sum_n mu(n)/n log zeta(n s); terms decay like 2^{-ns}.
  CompensatedSum sum;
  for (int n = 1; static_cast<double>(n) * s < 80.0 || n == 1; ++n) {
    const int mu = mobius_small(n);
    if (mu == 0) continue;
    sum.add(mu * std::log1p(zeta_minus_one(static_cast<double>(n) * s)) / n);
  }
  std::lock_guard lock(mutex);
  return cache[s] = sum.total();
}

SingularSeriesValue singular_series(const Tuple& t, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw ArgumentError("singular_series: rel_tol must lie in (0, 1e-2]");
  SingularSeriesValue out;
  if (!t.admissible()) return out;  // nu_p = p for some p <= k
  out.admissible = true;

  const int k = t.k();
  const auto span = static_cast<std::uint64_t>(t.back() - t.front());
  std::vector<char> seen;

  for (std::uint64_t cutoff = std::uint64_t{1} << 16; cutoff <= (std::uint64_t{1} << 26); cutoff <<= 2) {
    if (cutoff <= span || cutoff < 4 * static_cast<std::uint64_t>(k)) continue;
    auto block = block_for(cutoff);
    const auto& primes = block->primes;

    // Explicit factors for p <= span; beyond that nu_p = k.
    CompensatedSum explicit_part;
    double abs_explicit = 0;
    std::size_t i = 0;
    for (; i < primes.size() && primes[i] <= span; ++i) {
      const double p = primes[i];
      int nu = 0;
      {
        seen.assign(primes[i], 0);
        for (auto h : t.elements()) {
          auto r = static_cast<std::size_t>(h % static_cast<std::int64_t>(primes[i]));
          if (!seen[r]) {
            seen[r] = 1;
            ++nu;
          }
        }
      }
      const double term = std::log1p(-nu / p) - k * std::log1p(-1.0 / p);
      explicit_part.add(term);
      abs_explicit += std::abs(term);
    }
    const double suffix = block->suffix_for(k)[i];

    // sum_{p > cutoff} g_k(p) = sum_{m >= 2} (k - k^m)/m * T_m,
    // T_m = P(m) - sum_{p <= cutoff} p^{-m} <= cutoff^{1-m}/(m-1).
    const double c = static_cast<double>(cutoff);
    const double ratio = static_cast<double>(k) / c;
    CompensatedSum tail;
    double rounding = 0;
    double remainder = 0;
    for (int m = 2; m <= 64; ++m) {
      const double coeff = (k - std::pow(static_cast<double>(k), m)) / m;
      if (coeff != 0.0) {
        const double pz = prime_zeta(m);
        tail.add(coeff * (pz - block->power_sum(m)));
        rounding += 8 * kEps * std::abs(coeff) * pz;
      }
      remainder = c * std::pow(ratio, m + 1) / (static_cast<double>(m) * (m + 1)) / (1.0 - ratio);
      if (k == 1 || remainder <= 0.25 * rel_tol) break;
    }
    if (k == 1) remainder = 0;

    const double log_value = explicit_part.total() + suffix + tail.total();
    const double bound = remainder + rounding + 4 * kEps * (abs_explicit + std::abs(suffix) + std::abs(log_value));
    if (bound > rel_tol) continue;

    out.value = std::exp(log_value);
    out.cutoff_prime = primes.back();
    out.tail_error_bound = bound;
    return out;
  }
  throw ArgumentError("singular_series: rel_tol " + std::to_string(rel_tol) + " is not attainable for k=" +
                      std::to_string(k));
}

}  // namespace smallgaps
