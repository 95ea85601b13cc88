#pragma once

// Empirical weighted moment sums over n in [N+1, 2N] next to their
// predicted main terms.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smallgaps/parallel.hpp"
#include "smallgaps/primes.hpp"
#include "smallgaps/tuples.hpp"
#include "smallgaps/weights.hpp"

namespace smallgaps {

enum class MomentKind { lambda_sq, lambda_sq_theta_in, lambda_sq_theta_out, S, S_star, selberg_count, correlation };

std::string to_string(MomentKind kind);

struct MomentReport {
  MomentKind kind = MomentKind::lambda_sq;
  double empirical = 0;
  double predicted_main_term = 0;
  double ratio = 0;  // empirical / predicted, 0 when predicted == 0
  WeightParams params;
  std::string tuple_info;
  double singular_series = 0;  // of the relevant set, when one applies
  std::optional<bool> within_bound;
  std::optional<bool> in_regime;
  std::vector<std::string> notes;
};

// sum Lambda_R(n)^2 against C(2l, l)/(k+2l)! S(H) N (log R)^{k+2l}.
MomentReport moment_lambda_sq(const Tuple& t, const WeightParams& params, const PrimeTables& tables,
                              const Exec& exec = {});

// sum Lambda_R(n)^2 theta(n + h0). For h0 in H the prediction is
// C(2l+2, l+1)/(k+2l+1)! S(H) N (log R)^{k+2l+1}; otherwise
// C(2l, l)/(k+2l)! S(H u {h0}) N (log R)^{k+2l}.
MomentReport moment_lambda_sq_theta(const Tuple& t, std::int64_t h0, const WeightParams& params,
                                    const PrimeTables& tables, const Exec& exec = {});

enum class WeightMode { original, star };

inline constexpr std::uint64_t kBigSBudget = 100'000;

// Composite sum over admissible k-subsets H of {1..floor h}:
//   sum_n (sum_{h0 : S(H u {h0}) != 0} theta(n+h0) - nu log 3N) W(n)^2
// with W = Lambda_R (original) or its truncation (star).
MomentReport big_s(const WeightParams& params, const PrimeTables& tables, WeightMode mode,
                   std::uint64_t budget = kBigSBudget, const Exec& exec = {});

// Same sum evaluated through lambda_r_oracle; oracle scale only.
double big_s_oracle(const WeightParams& params, const PrimeTables& tables, WeightMode mode);

// Predicted main term M(k,l,h) C(2l,l)/((k+2l)! k!) N h^k (log R)^{k+2l}.
double big_s_main_term(const WeightParams& params);

struct MainTermAssembly {
  double assembled = 0;      // per-position predictions summed over H
  double closed_form = 0;    // M(k,l,h) x common factor
  double relative_gap = 0;   // |assembled/closed_form - 1|
};

// Sums the three per-H predictions given the singular-series totals
// sum_{|H|=k} S(H) and sum_{|H'|=k+1} S(H'); each (k+1)-set arises k+1 times
// as H u {h0}. With Gallagher's totals h^k/k! and h^{k+1}/(k+1)! the result
// must equal the closed form.
MainTermAssembly assemble_main_term(std::int64_t k, std::int64_t ell, double h, double log_R, double log_3N, int nu,
                                    double N, double sum_s_k, double sum_s_k1);
MainTermAssembly assemble_main_term_gallagher(std::int64_t k, std::int64_t ell, double h, double log_R,
                                              double log_3N, int nu, double N);

inline constexpr double kSelbergSlack = 0.5;

// #{n in [N+1, 2N] : (P_H(n), primorial(z)) = 1} against |H|! S(H) N / (log z)^|H|.
MomentReport selberg_count(const Tuple& t, double z, std::uint64_t N, const PrimeTables& tables,
                           double slack = kSelbergSlack, const Exec& exec = {});

// sum_n pi(n,h)^2 T(n)^2 with T(n) the number of admissible k-subsets of
// {1..floor h} whose P_H(n) has no prime factor <= R^delta; scale (h/log R)^k N.
MomentReport correlation_bound(const WeightParams& params, const PrimeTables& tables, std::uint64_t budget = kBigSBudget,
                           const Exec& exec = {});

}  // namespace smallgaps
