#pragma once

// Divisor-sum weight Lambda_R(n; H, l), its almost-prime truncation and
// the pointwise bound for the truncated weight.

#include <cstdint>
#include <vector>

#include "smallgaps/parallel.hpp"
#include "smallgaps/primes.hpp"
#include "smallgaps/tuples.hpp"

namespace smallgaps {

struct WeightParams {
  double R = 10;            // sieve level, > 1
  int k = 1;                // tuple size
  int ell = 0;              // 0 <= ell < k
  double delta = 0.1;       // almost-prime cutoff exponent, in (0, 1/2)
  std::uint64_t N = 1000;   // window is n in [N+1, 2N]
  int nu = 1;               // target prime count, 1 or 2
  double theta_level = 0.5; // level of distribution, in (0, 1]
  double eps = 0.0;         // epsilon >= 0
  double h = 10;            // box size

  double log_R() const;
  double log_3N() const;

  // Checks the invariants shared by all weighted sums.
  void validate() const;
  // Additionally R in [N^{1/5}, N^{(theta - eps)/(2 + delta)}].
  void validate_prediction_range() const;
  // R / N^{(theta - eps)/(2 + delta)}; recorded in reports.
  double level_ratio() const;
};

inline constexpr double kLowerLevelExponent = 0.2;  // R >= N^{1/5}

// Evaluates the weight for a fixed (H, R, l). The d-sum runs over squarefree
// divisors of the radical of P_H(n) that are <= R.
class DivisorWeight {
 public:
  DivisorWeight(const Tuple& t, double R, int ell);

  double operator()(std::uint64_t n, const PrimeTables& tables) const;
  // 0 unless every prime factor of every n + h_i exceeds z.
  double truncated(std::uint64_t n, double z, const PrimeTables& tables) const;
  // Magnitude of the d = 1 term, (log R)^{k+l}/(k+l)!.
  double leading_term() const { return leading_; }

  const Tuple& tuple() const { return tuple_; }
  double R() const { return R_; }
  int ell() const { return ell_; }

 private:
  Tuple tuple_;
  double R_;
  double log_R_;
  int ell_;
  int power_;
  double inv_factorial_;
  double leading_;
  std::uint64_t d_max_;
};

double lambda_r(std::uint64_t n, const Tuple& t, const WeightParams& params, const PrimeTables& tables);

// Brute-force path: every squarefree d <= R is tested against P_H(n) by
// division. Requires R <= 1e4.
double lambda_r_oracle(std::uint64_t n, const Tuple& t, const WeightParams& params, const PrimeTables& tables);

inline constexpr double kOracleMaxLevel = 1e4;

bool coprime_to_small_primes(std::uint64_t n, const Tuple& t, double z, const PrimeTables& tables);

// Lambda_R if (P_H(n), primorial(R^delta)) = 1, else 0.
double lambda_star(std::uint64_t n, const Tuple& t, const WeightParams& params, const PrimeTables& tables);

// 2^{k log 3N / (delta log R)} (log R)^{k+l} / (k+l)!; may be +inf.
double lambda_star_bound(const WeightParams& params);

struct RemovedMass {
  double removed = 0;  // sum of Lambda_R^2 over n failing coprimality
  double total = 0;    // sum of Lambda_R^2 over the window
  double ratio = 0;
};

// Share of sum Lambda_R^2 over n in [N+1, 2N] carried by n with
// (P_H(n), primorial(R^delta)) > 1.
RemovedMass removed_mass(const Tuple& t, const WeightParams& params, const PrimeTables& tables,
                         const Exec& exec = {});

// Tables must cover n + h for every n in [N+1, 2N] and h in [lo_offset, hi_offset].
void require_window(const PrimeTables& tables, std::uint64_t N, std::int64_t lo_offset, std::int64_t hi_offset);

}  // namespace smallgaps
