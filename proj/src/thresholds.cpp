#include "smallgaps/thresholds.hpp"

#include <cctype>
#include <cmath>

namespace smallgaps {

using boost::multiprecision::cpp_int;

namespace {

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

cpp_int pow10(int e) {
  cpp_int r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return ArgumentError("not an exact number: \"" + std::string(text) + "\""); };
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) throw fail();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw fail();
    return num / den;
  }
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  cpp_int digits = 0;
  int scale = 0;
  bool any = false, dot = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (dot) ++scale;
      any = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw fail();
  int exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw fail();
    try {
      std::size_t used = 0;
      exponent = std::stoi(s.substr(i + 1), &used);
      if (used != s.size() - i - 1) throw fail();
    } catch (const std::logic_error&) {
      throw fail();
    }
  }
  const int net = exponent - scale;
  Rational r = net >= 0 ? Rational(digits * pow10(net)) : Rational(digits, pow10(-net));
  return negative ? Rational(-r) : r;
}

std::string fraction_string(const Rational& r) {
  const cpp_int num = numerator(r);
  const cpp_int den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational weight_factor(std::int64_t k, std::int64_t ell) {
  if (k < 1 || ell < 0 || ell >= k) throw ArgumentError("weight_factor: need 0 <= ell < k");
  return Rational(cpp_int(2 * k), cpp_int(k + 2 * ell + 1)) * Rational(cpp_int(2 * ell + 1), cpp_int(ell + 1));
}

std::int64_t sqrt_half_ell(std::int64_t k) { return isqrt(k) / 2; }

std::int64_t best_ell(std::int64_t k) {
  if (k < 1) throw ArgumentError("best_ell: k must be >= 1");
  // With u = l + 1 the factor is proportional to (2u - 1)/(u (k + 2u - 1)),
  // whose derivative has the sign of k - 1 + 4u - 4u^2: unimodal with peak
  // at u = (1 + sqrt k)/2, i.e. l = (sqrt k - 1)/2.
  const std::int64_t s = isqrt(k);
  std::int64_t best = 0;
  Rational best_value = weight_factor(k, 0);
  for (std::int64_t cand = std::max<std::int64_t>(0, (s - 1) / 2 - 1); cand <= (s + 1) / 2 + 1; ++cand) {
    if (cand >= k) break;
    const Rational v = weight_factor(k, cand);
    if (v > best_value) {
      best_value = v;
      best = cand;
    }
  }
  return best;
}

double m_value(std::int64_t k, std::int64_t ell, double h, double log_R, double log_3N, int nu) {
  if (ell < 0 || ell >= k) throw ArgumentError("m_value: need 0 <= ell < k");
  if (!(log_R > 0) || !(log_3N > 0)) throw ArgumentError("m_value: logarithms must be positive");
  return to_double(weight_factor(k, ell)) * log_R + h - nu * log_3N;
}

namespace {

Rational level_coefficient(const Rational& theta, const Rational& eps, LevelConvention convention,
                           const Rational& delta) {
  if (convention == LevelConvention::half_theta_minus_eps) return theta / 2 - eps;
  return (theta - eps) / (2 + delta);
}

}  // namespace

Rational h_threshold_exact(std::int64_t k, std::int64_t ell, const Rational& theta, const Rational& eps, int nu,
                           LevelConvention convention, const Rational& delta) {
  if (theta <= 0 || theta > 1) throw ArgumentError("h_threshold: theta must lie in (0, 1]");
  return Rational(nu) - weight_factor(k, ell) * level_coefficient(theta, eps, convention, delta);
}

double h_threshold(std::int64_t k, std::int64_t ell, double theta, double eps, int nu, LevelConvention convention,
                   double delta) {
  return to_double(h_threshold_exact(k, ell, Rational(theta), Rational(eps), nu, convention, Rational(delta)));
}

ThresholdReport min_k_for_theta(const Rational& theta0, int nu, const Rational& eps, const Rational& delta,
                                std::int64_t k_limit) {
  if (theta0 <= 0 || theta0 > 1) throw ArgumentError("min_k_for_theta: theta0 must lie in (0, 1]");
  if (nu < 1) throw ArgumentError("min_k_for_theta: nu must be positive");
  if (eps < 0 || delta < 0) throw ArgumentError("min_k_for_theta: eps and delta must be non-negative");

  ThresholdReport r;
  r.theta0 = theta0;
  r.nu = nu;
  r.eps = eps;
  r.delta = delta;
  const Rational level = (theta0 - eps) / (2 + delta);
  // factor < 4 for every (k, l).
  if (4 * level <= nu) return r;

  // factor(k, l) * level > nu  <=>  2k(2l+1) a > nu b (k+2l+1)(l+1), level = a/b.
  const cpp_int a = numerator(level);
  const cpp_int b = denominator(level) * nu;
  for (std::int64_t k = 1; k <= k_limit; ++k) {
    const std::int64_t ell = best_ell(k);
    const cpp_int lhs = cpp_int(2 * k) * (2 * ell + 1) * a;
    const cpp_int rhs = b * (k + 2 * ell + 1) * (ell + 1);
    if (lhs > rhs) {
      r.feasible = true;
      r.k = k;
      r.ell = ell;
      r.factor = weight_factor(k, ell);
      r.h_threshold_coeff = Rational(nu) - r.factor * level;
      r.m_positive = r.h_threshold_coeff < 0;
      r.m = k - 1;
      return r;
    }
  }
  return r;
}

bool c2_check(std::int64_t k_max, std::int64_t* first_failure) {
  if (k_max < 4) throw ArgumentError("c2_check: k_max must be >= 4");
  for (std::int64_t k = 4; k <= k_max; ++k) {
    const std::int64_t ell = sqrt_half_ell(k);
    // 4 - factor = num/den > 0; factor > 4 - 8/sqrt k  <=>  64 den^2 > k num^2.
    const cpp_int den = cpp_int(k + 2 * ell + 1) * (ell + 1);
    const cpp_int num = 4 * den - cpp_int(2 * k) * (2 * ell + 1);
    if (num <= 0) continue;
    if (!(64 * den * den > k * num * num)) {
      if (first_failure) *first_failure = k;
      return false;
    }
  }
  return true;
}

}  // namespace smallgaps
