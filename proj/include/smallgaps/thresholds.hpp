#pragma once

// Exact-rational evaluation of the main-term sign functional
// M(k, l, h) = F(k, l) log R + h - nu log 3N with
// F(k, l) = (2k / (k + 2l + 1)) * ((2l + 1) / (l + 1)), and the level of
// distribution thresholds derived from it.

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "smallgaps/errors.hpp"

namespace smallgaps {

using Rational = boost::multiprecision::cpp_rational;

// Accepts "0.953", "20/21", "1", "-0.5", "1e-3".
Rational parse_rational(std::string_view text);
// "21/10", or "3" for integers.
std::string fraction_string(const Rational& r);
double to_double(const Rational& r);

Rational weight_factor(std::int64_t k, std::int64_t ell);

// ell in [0, k-1] maximising weight_factor(k, .).
std::int64_t best_ell(std::int64_t k);

// floor(sqrt(k) / 2).
std::int64_t sqrt_half_ell(std::int64_t k);

double m_value(std::int64_t k, std::int64_t ell, double h, double log_R, double log_3N, int nu);

// How log R is tied to log 3N when solving M > 0 for h.
enum class LevelConvention {
  half_theta_minus_eps,       // log R = (theta/2 - eps) log 3N
  theta_minus_eps_over_2_delta // log R = (theta - eps)/(2 + delta) log 3N
};

// c with M > 0 <=> h > c log 3N.
Rational h_threshold_exact(std::int64_t k, std::int64_t ell, const Rational& theta, const Rational& eps, int nu,
                           LevelConvention convention = LevelConvention::half_theta_minus_eps,
                           const Rational& delta = Rational(0));
double h_threshold(std::int64_t k, std::int64_t ell, double theta, double eps, int nu,
                   LevelConvention convention = LevelConvention::half_theta_minus_eps, double delta = 0.0);

struct ThresholdReport {
  bool feasible = false;
  std::int64_t k = 0;
  std::int64_t ell = 0;
  Rational theta0;
  int nu = 1;
  Rational eps;
  Rational delta;
  Rational factor;
  bool m_positive = false;
  Rational h_threshold_coeff;  // nu - factor (theta0 - eps)/(2 + delta)
  std::int64_t m = 0;          // exponent m(theta0) = k - 1
};

inline constexpr std::int64_t kMaxThresholdK = 1'000'000;

// Smallest k (with its best l) such that factor * (theta0 - eps)/(2 + delta) > nu.
// Infeasible when 4 (theta0 - eps)/(2 + delta) <= nu or no k <= k_limit works.
ThresholdReport min_k_for_theta(const Rational& theta0, int nu, const Rational& eps = Rational(0),
                                const Rational& delta = Rational(0), std::int64_t k_limit = kMaxThresholdK);

// factor(k, floor(sqrt k / 2)) > 4 - 8/sqrt k for every 4 <= k <= k_max.
bool c2_check(std::int64_t k_max, std::int64_t* first_failure = nullptr);

}  // namespace smallgaps
