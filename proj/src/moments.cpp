#include "smallgaps/moments.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "smallgaps/thresholds.hpp"

namespace smallgaps {

namespace {

double factorial(std::int64_t n) {
  double f = 1.0;
  for (std::int64_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

double central_binomial(std::int64_t ell) { return binomial(2 * ell, ell); }

void check_tuple_params(const Tuple& t, const WeightParams& params) {
  params.validate();
  if (params.k != t.k()) throw ArgumentError("params.k does not match the tuple size");
}

std::string level_note(const WeightParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "R/N^((theta-eps)/(2+delta)) = " << p.level_ratio();
  return os.str();
}

double safe_ratio(double a, double b) { return b != 0.0 ? a / b : 0.0; }

std::vector<Tuple> admissible_family(int k, double h, std::uint64_t budget) {
  AdmissibleTupleStream stream(k, h, budget, 1, 1);
  if (stream.header().mode != EnumerationMode::exhaustive)
    throw BudgetError("admissible k-subsets of {1..floor h} exceed enumeration budget " + std::to_string(budget));
  std::vector<Tuple> out;
  while (auto t = stream.next()) out.push_back(std::move(*t));
  return out;
}

std::string family_info(int k, double h) {
  return "admissible " + std::to_string(k) + "-subsets of {1.." + std::to_string(static_cast<std::int64_t>(std::floor(h))) +
         "}";
}

}  // namespace

std::string to_string(MomentKind kind) {
  switch (kind) {
    case MomentKind::lambda_sq: return "lambda_sq";
    case MomentKind::lambda_sq_theta_in: return "lambda_sq_theta_in";
    case MomentKind::lambda_sq_theta_out: return "lambda_sq_theta_out";
    case MomentKind::S: return "S";
    case MomentKind::S_star: return "S_star";
    case MomentKind::selberg_count: return "selberg_count";
    case MomentKind::correlation: return "correlation";
  }
  return "unknown";
}

MomentReport moment_lambda_sq(const Tuple& t, const WeightParams& params, const PrimeTables& tables,
                              const Exec& exec) {
  check_tuple_params(t, params);
  if (!t.admissible()) throw ArgumentError("moment_lambda_sq: tuple is inadmissible (prediction is 0)");
  require_window(tables, params.N, t.front(), t.back());

  const DivisorWeight w(t, params.R, params.ell);
  MomentReport r;
  r.kind = MomentKind::lambda_sq;
  r.params = params;
  r.tuple_info = t.to_string();
  r.empirical = window_sum(params.N + 1, 2 * params.N, exec, [&](std::uint64_t n) {
    const double v = w(n, tables);
    return v * v;
  });
  r.singular_series = singular_series(t).value;
  const std::int64_t k = t.k(), ell = params.ell;
  r.predicted_main_term = central_binomial(ell) / factorial(k + 2 * ell) * r.singular_series *
                          static_cast<double>(params.N) * std::pow(params.log_R(), static_cast<double>(k + 2 * ell));
  r.ratio = safe_ratio(r.empirical, r.predicted_main_term);
  r.notes.push_back(level_note(params));
  return r;
}

MomentReport moment_lambda_sq_theta(const Tuple& t, std::int64_t h0, const WeightParams& params,
                                    const PrimeTables& tables, const Exec& exec) {
  check_tuple_params(t, params);
  if (h0 < 1) throw ArgumentError("h0 must be a positive integer");
  const bool inside = t.contains(h0);
  const Tuple relevant = t.with(h0);
  if (!relevant.admissible()) throw ArgumentError("singular series of H u {h0} vanishes");
  require_window(tables, params.N, std::min(t.front(), h0), std::max(t.back(), h0));

  const DivisorWeight w(t, params.R, params.ell);
  MomentReport r;
  r.kind = inside ? MomentKind::lambda_sq_theta_in : MomentKind::lambda_sq_theta_out;
  r.params = params;
  r.tuple_info = t.to_string() + "; h0=" + std::to_string(h0);
  const auto shift = static_cast<std::uint64_t>(h0);
  r.empirical = window_sum(params.N + 1, 2 * params.N, exec, [&](std::uint64_t n) {
    const std::uint64_t m = n + shift;
    if (!tables.is_prime_unchecked(m)) return 0.0;
    const double v = w(n, tables);
    return v * v * std::log(static_cast<double>(m));
  });
  const std::int64_t k = t.k(), ell = params.ell;
  const double N = static_cast<double>(params.N);
  r.singular_series = singular_series(relevant).value;
  if (inside) {
    r.predicted_main_term = central_binomial(ell + 1) / factorial(k + 2 * ell + 1) * r.singular_series * N *
                            std::pow(params.log_R(), static_cast<double>(k + 2 * ell + 1));
  } else {
    r.predicted_main_term = central_binomial(ell) / factorial(k + 2 * ell) * r.singular_series * N *
                            std::pow(params.log_R(), static_cast<double>(k + 2 * ell));
  }
  r.ratio = safe_ratio(r.empirical, r.predicted_main_term);
  r.notes.push_back(level_note(params));
  return r;
}

double big_s_main_term(const WeightParams& params) {
  const std::int64_t k = params.k, ell = params.ell;
  const double M = m_value(k, ell, params.h, params.log_R(), params.log_3N(), params.nu);
  return M * central_binomial(ell) / (factorial(k + 2 * ell) * factorial(k)) * static_cast<double>(params.N) *
         std::pow(params.h, static_cast<double>(k)) * std::pow(params.log_R(), static_cast<double>(k + 2 * ell));
}

namespace {

struct FamilyMember {
  DivisorWeight weight;
  std::vector<std::int64_t> offsets;  // h0 with S(H u {h0}) != 0
};

std::vector<FamilyMember> build_family(const WeightParams& params, std::uint64_t budget) {
  const auto h_floor = static_cast<std::int64_t>(std::floor(params.h));
  std::vector<FamilyMember> family;
  for (auto& t : admissible_family(params.k, params.h, budget)) {
    std::vector<std::int64_t> offsets;
    for (std::int64_t h0 = 1; h0 <= h_floor; ++h0)
      if (t.contains(h0) || t.with(h0).admissible()) offsets.push_back(h0);
    family.push_back({DivisorWeight(t, params.R, params.ell), std::move(offsets)});
  }
  return family;
}

}  // namespace

MomentReport big_s(const WeightParams& params, const PrimeTables& tables, WeightMode mode, std::uint64_t budget,
                   const Exec& exec) {
  params.validate();
  const auto h_floor = static_cast<std::int64_t>(std::floor(params.h));
  if (h_floor < params.k) throw ArgumentError("big_s: need floor(h) >= k");
  require_window(tables, params.N, 1, h_floor);
  const auto family = build_family(params, budget);
  const double shift = params.nu * params.log_3N();
  const double z = std::pow(params.R, params.delta);

  MomentReport r;
  r.kind = mode == WeightMode::star ? MomentKind::S_star : MomentKind::S;
  r.params = params;
  r.tuple_info = family_info(params.k, params.h);
  r.empirical = window_sum(params.N + 1, 2 * params.N, exec, [&](std::uint64_t n) {
    PairwiseSum acc;
    for (const auto& member : family) {
      const double w = mode == WeightMode::star ? member.weight.truncated(n, z, tables) : member.weight(n, tables);
      if (w == 0.0) {
        acc.add(0.0);
        continue;
      }
      double inner = 0.0;
      for (auto h0 : member.offsets) {
        const std::uint64_t m = n + static_cast<std::uint64_t>(h0);
        if (tables.is_prime_unchecked(m)) inner += std::log(static_cast<double>(m));
      }
      acc.add((inner - shift) * w * w);
    }
    return acc.total();
  });
  r.predicted_main_term = big_s_main_term(params);
  r.ratio = safe_ratio(r.empirical, r.predicted_main_term);
  r.notes.push_back(level_note(params));
  r.notes.push_back("family size " + std::to_string(family.size()));
  if (mode == WeightMode::star)
    r.notes.push_back("star-mode main term carries an additional O_k(delta log N) term in M, not included");
  return r;
}

double big_s_oracle(const WeightParams& params, const PrimeTables& tables, WeightMode mode) {
  params.validate();
  const auto h_floor = static_cast<std::int64_t>(std::floor(params.h));
  const double shift = params.nu * params.log_3N();
  const double z = std::pow(params.R, params.delta);
  double total = 0.0;
  for (std::uint64_t n = params.N + 1; n <= 2 * params.N; ++n) {
    for (const auto& t : admissible_family(params.k, params.h, kBigSBudget)) {
      double w = lambda_r_oracle(n, t, params, tables);
      if (mode == WeightMode::star && !coprime_to_small_primes(n, t, z, tables)) w = 0.0;
      double inner = -shift;
      for (std::int64_t h0 = 1; h0 <= h_floor; ++h0)
        if (t.with(h0).admissible()) inner += theta(n + static_cast<std::uint64_t>(h0), tables);
      total += inner * w * w;
    }
  }
  return total;
}

MainTermAssembly assemble_main_term(std::int64_t k, std::int64_t ell, double h, double log_R, double log_3N, int nu,
                                    double N, double sum_s_k, double sum_s_k1) {
  const double L = log_R;
  const double base = central_binomial(ell) / factorial(k + 2 * ell) * N * std::pow(L, static_cast<double>(k + 2 * ell));
  const double own = static_cast<double>(k) * central_binomial(ell + 1) / factorial(k + 2 * ell + 1) * sum_s_k * N *
                     std::pow(L, static_cast<double>(k + 2 * ell + 1));
  const double others = static_cast<double>(k + 1) * sum_s_k1 * base;
  const double shift = nu * log_3N * sum_s_k * base;

  MainTermAssembly a;
  a.assembled = own + others - shift;
  a.closed_form = m_value(k, ell, h, log_R, log_3N, nu) * central_binomial(ell) / (factorial(k + 2 * ell) * factorial(k)) *
                  N * std::pow(h, static_cast<double>(k)) * std::pow(L, static_cast<double>(k + 2 * ell));
  a.relative_gap = std::abs(a.assembled / a.closed_form - 1.0);
  return a;
}

MainTermAssembly assemble_main_term_gallagher(std::int64_t k, std::int64_t ell, double h, double log_R,
                                              double log_3N, int nu, double N) {
  const double s_k = std::pow(h, static_cast<double>(k)) / factorial(k);
  const double s_k1 = std::pow(h, static_cast<double>(k + 1)) / factorial(k + 1);
  return assemble_main_term(k, ell, h, log_R, log_3N, nu, N, s_k, s_k1);
}

MomentReport selberg_count(const Tuple& t, double z, std::uint64_t N, const PrimeTables& tables, double slack,
                           const Exec& exec) {
  if (!(z > 1.0)) throw ArgumentError("selberg_count: z must exceed 1");
  if (N < 1) throw ArgumentError("selberg_count: N must be positive");
  require_window(tables, N, t.front(), t.back());
  MomentReport r;
  r.kind = MomentKind::selberg_count;
  r.params.N = N;
  r.params.k = t.k();
  r.tuple_info = t.to_string();
  r.empirical = static_cast<double>(
      window_count(N + 1, 2 * N, exec, [&](std::uint64_t n) { return coprime_to_small_primes(n, t, z, tables); }));
  r.singular_series = singular_series(t).value;
  r.predicted_main_term = factorial(t.k()) * r.singular_series * static_cast<double>(N) /
                          std::pow(std::log(z), static_cast<double>(t.k()));
  r.ratio = safe_ratio(r.empirical, r.predicted_main_term);
  std::ostringstream os;
  os << "z=" << z << ", slack=" << slack;
  r.notes.push_back(os.str());
  if (!t.admissible()) {
    r.notes.push_back("inadmissible tuple: bound is 0 and does not apply");
  } else {
    r.within_bound = r.empirical <= r.predicted_main_term * (1.0 + slack);
  }
  return r;
}

MomentReport correlation_bound(const WeightParams& params, const PrimeTables& tables, std::uint64_t budget,
                           const Exec& exec) {
  params.validate();
  if (!(params.h >= 2.0)) throw ArgumentError("correlation_bound: requires h >= 2");
  const auto h_floor = static_cast<std::int64_t>(std::floor(params.h));
  if (h_floor > 64) throw ArgumentError("correlation_bound: floor(h) above 64 is not supported");
  if (h_floor < params.k) throw ArgumentError("correlation_bound: need floor(h) >= k");
  require_window(tables, params.N, 1, h_floor);

  std::vector<std::uint64_t> masks;
  for (const auto& t : admissible_family(params.k, params.h, budget)) {
    std::uint64_t mask = 0;
    for (auto e : t.elements()) mask |= std::uint64_t{1} << (e - 1);
    masks.push_back(mask);
  }
  const double z = std::pow(params.R, params.delta);

  MomentReport r;
  r.kind = MomentKind::correlation;
  r.params = params;
  r.tuple_info = family_info(params.k, params.h);
  r.empirical = window_sum(params.N + 1, 2 * params.N, exec, [&](std::uint64_t n) {
    std::uint64_t good = 0;
    std::uint64_t primes = 0;
    for (std::int64_t j = 1; j <= h_floor; ++j) {
      const std::uint64_t m = n + static_cast<std::uint64_t>(j);
      if (tables.smallest_factor_unchecked(m) > z) good |= std::uint64_t{1} << (j - 1);
      if (tables.is_prime_unchecked(m)) ++primes;
    }
    if (primes == 0) return 0.0;
    std::uint64_t count = 0;
    for (auto mask : masks) count += (mask & ~good) == 0 ? 1 : 0;
    const double v = static_cast<double>(primes * count);
    return v * v;
  });
  r.predicted_main_term = std::pow(params.h / params.log_R(), static_cast<double>(params.k)) * static_cast<double>(params.N);
  r.ratio = safe_ratio(r.empirical, r.predicted_main_term);
  r.in_regime = params.h <= params.log_R();
  if (!*r.in_regime) r.notes.push_back("h exceeds log R: outside the 2 <= h <= log R regime of the bound");
  r.notes.push_back("family size " + std::to_string(masks.size()));
  return r;
}

}  // namespace smallgaps
