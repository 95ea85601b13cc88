#include "smallgaps/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smallgaps {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

double WeightParams::log_R() const { return std::log(R); }
double WeightParams::log_3N() const { return std::log(3.0 * static_cast<double>(N)); }

void WeightParams::validate() const {
  if (!(R > 1.0)) throw ArgumentError("R must exceed 1");
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (ell < 0 || ell >= k) throw ArgumentError("need 0 <= ell < k");
  if (!(delta > 0.0 && delta < 0.5)) throw ArgumentError("delta must lie in (0, 1/2)");
  if (nu != 1 && nu != 2) throw ArgumentError("nu must be 1 or 2");
  if (!(theta_level > 0.0 && theta_level <= 1.0)) throw ArgumentError("theta must lie in (0, 1]");
  if (!(eps >= 0.0)) throw ArgumentError("eps must be non-negative");
  if (N < 1) throw ArgumentError("N must be positive");
}

void WeightParams::validate_prediction_range() const {
  validate();
  const double logN = std::log(static_cast<double>(N));
  const double lo = kLowerLevelExponent * logN;
  const double hi = (theta_level - eps) / (2.0 + delta) * logN;
  if (log_R() < lo - 1e-12 || log_R() > hi + 1e-12)
    throw ArgumentError("R outside [N^{1/5}, N^{(theta-eps)/(2+delta)}]");
}

double WeightParams::level_ratio() const {
  return std::exp(log_R() - (theta_level - eps) / (2.0 + delta) * std::log(static_cast<double>(N)));
}

DivisorWeight::DivisorWeight(const Tuple& t, double R, int ell) : tuple_(t), R_(R), ell_(ell) {
  if (!(R > 1.0)) throw ArgumentError("R must exceed 1");
  if (ell < 0 || ell >= t.k()) throw ArgumentError("need 0 <= ell < k");
  log_R_ = std::log(R);
  power_ = t.k() + ell;
  inv_factorial_ = 1.0 / factorial(power_);
  leading_ = ipow(log_R_, power_) * inv_factorial_;
  d_max_ = R >= 1.8e19 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(std::floor(R));
}

double DivisorWeight::operator()(std::uint64_t n, const PrimeTables& tables) const {
  // Distinct primes <= R dividing some n + h_i.
  thread_local std::vector<std::uint64_t> primes;
  primes.clear();
  for (auto h : tuple_.elements())
    tables.for_each_prime_factor(n + static_cast<std::uint64_t>(h), d_max_,
                                 [&](std::uint64_t p) { primes.push_back(p); });
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  // Depth-first over squarefree d with d <= R; primes ascend, so the first
  // prime that overshoots ends the scan at that depth.
  double sum = 0.0;
  auto expand = [&](auto&& self, std::size_t next, std::uint64_t d, int sign) -> void {
    sum += sign * ipow(log_R_ - std::log(static_cast<double>(d)), power_);
    for (std::size_t i = next; i < primes.size(); ++i) {
      if (primes[i] > d_max_ / d) break;
      self(self, i + 1, d * primes[i], -sign);
    }
  };
  expand(expand, 0, 1, 1);
  return sum * inv_factorial_;
}

double DivisorWeight::truncated(std::uint64_t n, double z, const PrimeTables& tables) const {
  for (auto h : tuple_.elements())
    if (tables.smallest_factor(n + static_cast<std::uint64_t>(h)) <= z) return 0.0;
  return (*this)(n, tables);
}

namespace {

void check_params(const Tuple& t, const WeightParams& params) {
  if (params.k != t.k()) throw ArgumentError("params.k does not match the tuple size");
  if (params.ell < 0 || params.ell >= t.k()) throw ArgumentError("need 0 <= ell < k");
  if (!(params.R > 1.0)) throw ArgumentError("R must exceed 1");
}

}  // namespace

double lambda_r(std::uint64_t n, const Tuple& t, const WeightParams& params, const PrimeTables& tables) {
  check_params(t, params);
  return DivisorWeight(t, params.R, params.ell)(n, tables);
}

double lambda_r_oracle(std::uint64_t n, const Tuple& t, const WeightParams& params, const PrimeTables& tables) {
  check_params(t, params);
  if (params.R > kOracleMaxLevel) throw ArgumentError("lambda_r_oracle: R exceeds oracle scale 1e4");
  for (auto h : t.elements()) {
    const std::uint64_t m = n + static_cast<std::uint64_t>(h);
    if (!tables.contains(m)) throw RangeError("lambda_r_oracle: n+h outside tables");
  }
  const int power = t.k() + params.ell;
  const auto d_max = static_cast<std::uint64_t>(std::floor(params.R));
  double sum = 0.0;
  for (std::uint64_t d = 1; d <= d_max; ++d) {
    // Mobius by trial division.
    int mu = 1;
    std::uint64_t m = d;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      m /= p;
      if (m % p == 0) {
        mu = 0;
        break;
      }
      mu = -mu;
    }
    if (mu == 0) continue;
    if (m > 1) mu = -mu;
    std::uint64_t residue = 1 % d;
    for (auto h : t.elements()) residue = residue * ((n + static_cast<std::uint64_t>(h)) % d) % d;
    if (residue != 0) continue;
    sum += mu * std::pow(std::log(params.R / static_cast<double>(d)), power);
  }
  return sum / std::tgamma(power + 1.0);
}

bool coprime_to_small_primes(std::uint64_t n, const Tuple& t, double z, const PrimeTables& tables) {
  for (auto h : t.elements())
    if (tables.smallest_factor(n + static_cast<std::uint64_t>(h)) <= z) return false;
  return true;
}

double lambda_star(std::uint64_t n, const Tuple& t, const WeightParams& params, const PrimeTables& tables) {
  check_params(t, params);
  return DivisorWeight(t, params.R, params.ell).truncated(n, std::pow(params.R, params.delta), tables);
}

double lambda_star_bound(const WeightParams& params) {
  if (!(params.R > 1.0) || !(params.delta > 0.0)) throw ArgumentError("lambda_star_bound: need R > 1, delta > 0");
  if (params.log_R() < kLowerLevelExponent * std::log(static_cast<double>(params.N)) - 1e-12)
    throw ArgumentError("lambda_star_bound: requires R >= N^{1/5}");
  const int power = params.k + params.ell;
  const double log2_factor = params.k * params.log_3N() / (params.delta * params.log_R());
  return std::exp2(log2_factor) * ipow(params.log_R(), power) / factorial(power);
}

void require_window(const PrimeTables& tables, std::uint64_t N, std::int64_t lo_offset, std::int64_t hi_offset) {
  const auto first = static_cast<std::int64_t>(N + 1) + lo_offset;
  const auto last = static_cast<std::int64_t>(2 * N) + hi_offset;
  if (first < static_cast<std::int64_t>(tables.lo()) || last > static_cast<std::int64_t>(tables.hi()))
    throw RangeError("window [" + std::to_string(first) + ", " + std::to_string(last) +
                     "] not covered by tables [" + std::to_string(tables.lo()) + ", " + std::to_string(tables.hi()) +
                     "]");
}

RemovedMass removed_mass(const Tuple& t, const WeightParams& params, const PrimeTables& tables, const Exec& exec) {
  check_params(t, params);
  require_window(tables, params.N, t.front(), t.back());
  const DivisorWeight w(t, params.R, params.ell);
  const double z = std::pow(params.R, params.delta);
  RemovedMass out;
  out.total = window_sum(params.N + 1, 2 * params.N, exec, [&](std::uint64_t n) {
    const double v = w(n, tables);
    return v * v;
  });
  out.removed = window_sum(params.N + 1, 2 * params.N, exec, [&](std::uint64_t n) {
    if (coprime_to_small_primes(n, t, z, tables)) return 0.0;
    const double v = w(n, tables);
    return v * v;
  });
  out.ratio = out.total > 0 ? out.removed / out.total : 0.0;
  return out;
}

}  // namespace smallgaps
