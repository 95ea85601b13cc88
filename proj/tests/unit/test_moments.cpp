#include <doctest.h>

#include <cmath>

#include "smallgaps/errors.hpp"
#include "smallgaps/moments.hpp"
#include "smallgaps/thresholds.hpp"

using namespace smallgaps;

namespace {

WeightParams base_params(std::uint64_t N, double R, int k, int ell) {
  WeightParams p;
  p.N = N;
  p.R = R;
  p.k = k;
  p.ell = ell;
  return p;
}

}  // namespace

TEST_SUITE("moments") {
  const auto tables = build_tables(1, 2'100'000);

  TEST_CASE("prediction coefficients") {
    const Tuple t = Tuple::parse("1,3");
    const auto p = base_params(100'000, std::pow(1e5, 0.25), 2, 1);
    const auto sq = moment_lambda_sq(t, p, tables);
    const double s = singular_series(t).value;
    CHECK(sq.predicted_main_term == doctest::Approx(s * 1e5 * std::pow(p.log_R(), 4) / 12).epsilon(1e-12));
    CHECK(sq.kind == MomentKind::lambda_sq);

    const auto in = moment_lambda_sq_theta(t, 3, p, tables);
    CHECK(in.kind == MomentKind::lambda_sq_theta_in);
    CHECK(in.predicted_main_term == doctest::Approx(s * 1e5 * std::pow(p.log_R(), 5) / 20).epsilon(1e-12));

    const auto out = moment_lambda_sq_theta(t, 7, p, tables);
    CHECK(out.kind == MomentKind::lambda_sq_theta_out);
    const double s3 = singular_series(Tuple::parse("1,3,7")).value;
    CHECK(out.predicted_main_term == doctest::Approx(sq.predicted_main_term * s3 / s).epsilon(1e-12));

    CHECK_THROWS_AS(moment_lambda_sq_theta(t, 5, p, tables), ArgumentError);
    CHECK_THROWS_AS(moment_lambda_sq(Tuple::parse("1,2"), p, tables), ArgumentError);

    const Tuple single({1});
    const auto one = moment_lambda_sq(single, base_params(100'000, 20, 1, 0), tables);
    CHECK(one.predicted_main_term == doctest::Approx(1e5 * std::log(20.0)).epsilon(1e-12));
  }

  TEST_CASE("moment sums do not depend on thread count") {
    const Tuple t = Tuple::parse("1,3");
    const auto p = base_params(1'000'000, std::pow(1e6, 0.25), 2, 1);
    const auto a = moment_lambda_sq(t, p, tables, Exec{1});
    const auto b = moment_lambda_sq(t, p, tables, Exec{3});
    CHECK(a.empirical == b.empirical);
    CHECK(a.ratio > 0.4);
    CHECK(a.ratio < 2.5);
  }

  TEST_CASE("big S: fast path equals oracle path") {
    for (auto mode : {WeightMode::original, WeightMode::star}) {
      auto p = base_params(10'000, 30, 1, 0);
      p.h = 10;
      p.delta = 0.4;
      const auto fast = big_s(p, tables, mode);
      const double slow = big_s_oracle(p, tables, mode);
      CHECK(fast.empirical == doctest::Approx(slow).epsilon(1e-9));
    }
    auto p = base_params(10'000, 30, 2, 1);
    p.h = 12;
    p.delta = 0.4;
    CHECK(big_s(p, tables, WeightMode::original).empirical ==
          doctest::Approx(big_s_oracle(p, tables, WeightMode::original)).epsilon(1e-9));
    CHECK(big_s(p, tables, WeightMode::original).predicted_main_term == doctest::Approx(big_s_main_term(p)));
    p.h = 1000;
    CHECK_THROWS_AS(big_s(p, tables, WeightMode::original, 1000), BudgetError);
  }

  TEST_CASE("star mode removes exactly the non-coprime n") {
    auto p = base_params(20'000, 40, 2, 1);
    p.h = 8;
    p.delta = 0.45;
    const double z = std::pow(p.R, p.delta);
    const double shift = p.nu * p.log_3N();
    double removed = 0;
    AdmissibleTupleStream stream(p.k, p.h);
    while (auto t = stream.next()) {
      for (std::uint64_t n = p.N + 1; n <= 2 * p.N; ++n) {
        if (coprime_to_small_primes(n, *t, z, tables)) continue;
        double inner = -shift;
        for (std::int64_t h0 = 1; h0 <= 8; ++h0)
          if (t->contains(h0) || singular_series(t->with(h0)).value != 0) inner += theta(n + h0, tables);
        const double w = lambda_r(n, *t, p, tables);
        removed += inner * w * w;
      }
    }
    const double diff = big_s(p, tables, WeightMode::original).empirical - big_s(p, tables, WeightMode::star).empirical;
    CHECK(diff == doctest::Approx(removed).epsilon(1e-9));
  }

  TEST_CASE("main-term assembly reproduces M times the common factor") {
    for (std::int64_t k : {1, 2, 5, 7}) {
      for (std::int64_t ell = 0; ell < std::min<std::int64_t>(k, 3); ++ell) {
        const auto a = assemble_main_term_gallagher(k, ell, 13.0, 7.0, 25.0, 1, 1e6);
        CHECK(a.relative_gap < 1e-12);
      }
    }
  }

  TEST_CASE("Selberg count") {
    const Tuple t = Tuple::parse("1,3");
    for (double z : {30.0, 100.0}) {
      const auto r = selberg_count(t, z, 1'000'000, tables);
      REQUIRE(r.within_bound.has_value());
      CHECK(*r.within_bound);
      const double s = singular_series(t).value;
      CHECK(r.predicted_main_term == doctest::Approx(2 * s * 1e6 / std::pow(std::log(z), 2)).epsilon(1e-12));
    }
    const auto bad = selberg_count(Tuple::parse("1,2"), 30, 10'000, tables);
    CHECK_FALSE(bad.within_bound.has_value());
    CHECK(bad.empirical == 0);

    // k = 1 with z = sqrt(2N + 1) counts the primes in (N + 1, 2N + 1].
    const std::uint64_t N = 1'000'000;
    const double z = std::sqrt(2.0 * N + 1);
    const auto one = selberg_count(Tuple({1}), z, N, tables);
    CHECK(one.empirical == static_cast<double>(pi(2 * N + 1, tables) - pi(N + 1, tables)));
    CHECK(*one.within_bound);
  }

  TEST_CASE("correlation bound") {
    // log R is below 3 here, so only k = 1 has admissible sets with h <= log R.
    auto p = base_params(100'000, std::pow(1e5, 0.24), 1, 0);
    p.delta = 0.05;
    p.h = 2.5;
    const auto r = correlation_bound(p, tables);
    CHECK(r.empirical > 0);
    CHECK(std::isfinite(r.ratio));
    REQUIRE(r.in_regime.has_value());
    CHECK(*r.in_regime);
    p.h = 10;
    const auto outside = correlation_bound(p, tables);
    CHECK_FALSE(*outside.in_regime);
    p.h = 1.5;
    CHECK_THROWS_AS(correlation_bound(p, tables), ArgumentError);
  }
}
