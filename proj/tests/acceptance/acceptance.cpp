// Acceptance suite. `acceptance <n>` runs criterion n, `acceptance all` runs
// every criterion. Each prints one PASS/FAIL line; details go on indented
// lines beneath it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "smallgaps/gaps.hpp"
#include "smallgaps/moments.hpp"
#include "smallgaps/primes.hpp"
#include "smallgaps/thresholds.hpp"
#include "smallgaps/tuples.hpp"
#include "smallgaps/weights.hpp"

using namespace smallgaps;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { details.push_back("info " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

// --- 1 -----------------------------------------------------------------------

Outcome threshold_exactness() {
  Outcome o;
  const Rational f = weight_factor(7, 1);
  o.check(f == Rational(21, 10), "factor(7,1) = " + fraction_string(f) + " (expect 21/10, exact)");
  const double m = m_value(7, 1, 0.75, 10.0, 20.0, 1);
  o.check(m == 21.0 + 0.75 - 20.0, fmt("m_value(7,1,h=0.75,logR=10,log3N=20) = %.17g (expect 1.75)", m));
  const auto r = min_k_for_theta(parse_rational("0.953"), 1);
  o.check(r.feasible && r.k == 7 && r.ell == 1, fmt("min_k(theta0=0.953) = %lld, ell = %lld", (long long)r.k, (long long)r.ell));
  o.check(min_k_for_theta(Rational(20, 21), 1).k > 7, "theta0 = 20/21 exactly is not enough for k = 7");
  Rational best6 = 0;
  for (std::int64_t ell = 0; ell < 6; ++ell) best6 = std::max(best6, weight_factor(6, ell));
  o.check(best6 == Rational(2), "max over ell of factor(6, ell) = " + fraction_string(best6) + " (expect 2)");
  o.check(!(best6 * Rational(1) / 2 > 1), "k = 6 at theta0 = 1: 2 * (1/2) > 1 is false (just fails)");
  o.check(min_k_for_theta(Rational(1), 1).k == 7, "min_k(theta0 = 1) = 7, so k > 6 is required for every theta0 <= 1");
  return o;
}

// --- 2 -----------------------------------------------------------------------

Outcome c2_verification() {
  Outcome o;
  std::int64_t failure = 0;
  const bool ok = c2_check(10'000, &failure);
  o.check(ok, ok ? "factor(k, floor(sqrt k / 2)) > 4 - 8/sqrt k for all 4 <= k <= 10^4 (exact)"
                 : fmt("first failure at k = %lld", (long long)failure));
  return o;
}

// --- 3 -----------------------------------------------------------------------

Outcome weight_oracle() {
  Outcome o;
  const auto tables = build_tables(1, 10'000 + 10);
  std::vector<Tuple> family;
  for (int k : {2, 3}) {
    AdmissibleTupleStream s(k, 10);
    while (auto t = s.next()) family.push_back(*t);
  }
  std::uint64_t evaluations = 0, failures = 0;
  double worst = 0;
  for (const auto& t : family) {
    for (int ell : {0, 1}) {
      for (double R : {10.0, 100.0, 1000.0}) {
        WeightParams p;
        p.R = R;
        p.k = t.k();
        p.ell = ell;
        const double scale_floor = DivisorWeight(t, R, ell).leading_term();
        for (std::uint64_t n = 1; n <= 10'000; ++n) {
          const double a = lambda_r(n, t, p, tables);
          const double b = lambda_r_oracle(n, t, p, tables);
          const double err = std::abs(a - b) / std::max(std::abs(b), scale_floor);
          worst = std::max(worst, err);
          failures += err > 1e-9;
          ++evaluations;
        }
      }
    }
  }
  o.note(fmt("%zu admissible tuples, %llu evaluations", family.size(), (unsigned long long)evaluations));
  o.check(failures == 0, fmt("max |fast - oracle| / max(|oracle|, (log R)^{k+l}/(k+l)!) = %.3g (tol 1e-9)", worst));
  return o;
}

// --- 4 -----------------------------------------------------------------------

Outcome pointwise_bound() {
  Outcome o;
  const std::uint64_t N = 1'000'000;
  const auto tables = build_tables(1, 2 * N + 16);
  for (const char* text : {"1,3", "1,7", "2,6"}) {
    const Tuple t = Tuple::parse(text);
    WeightParams p;
    p.N = N;
    p.k = 2;
    p.ell = 1;
    p.delta = 0.1;
    p.R = std::pow(static_cast<double>(N), 0.24);
    const double bound = lambda_star_bound(p);
    double worst = 0;
    for (std::uint64_t n = N + 1; n <= 2 * N; ++n) worst = std::max(worst, std::abs(lambda_star(n, t, p, tables)));
    o.check(worst <= bound, fmt("H={%s}: max |Lambda*| = %.6g <= bound %.6g", text, worst, bound));
  }
  return o;
}

// --- 5 -----------------------------------------------------------------------

Outcome singular_series_check() {
  Outcome o;
  // Independent direct product for {1,3}: factor 2 at p = 2 and
  // 1 - 1/(p-1)^2 for odd p <= C. The omitted tail of -log is below 1/(C-2).
  const std::uint64_t C = 10'000'000;
  const auto tables = build_tables(1, C);
  long double log_sum = std::log(2.0L);
  for (std::uint64_t p = 3; p <= C; p += 2) {
    if (!tables.is_prime(p)) continue;
    const long double q = static_cast<long double>(p - 1);
    log_sum += std::log1p(-1.0L / (q * q));
  }
  const double direct = static_cast<double>(std::exp(log_sum));
  const double tail = 1.0 / static_cast<double>(C - 2) * 1.01;
  o.note(fmt("direct product over p <= 10^7: %.12f, relative tail bound %.2g", direct, tail));
  o.check(std::abs(direct - 1.3203236) <= 1e-6, "direct product = 1.3203236 +- 1e-6");
  const auto lib = singular_series(Tuple::parse("1,3"), 1e-8);
  o.check(std::abs(lib.value - direct) <= 1e-6, fmt("library S({1,3}) = %.12f within 1e-6 of the direct product", lib.value));
  o.check(std::abs(lib.value - 1.3203236) <= 1e-6, "library S({1,3}) = 1.3203236 +- 1e-6");
  for (std::int64_t h : {1, 2, 97}) {
    const auto one = singular_series(Tuple({h}));
    o.check(std::abs(one.value - 1.0) <= one.tail_error_bound + 4e-16,
            fmt("S({%lld}) = %.17g, |S - 1| <= tail bound %.2g", (long long)h, one.value, one.tail_error_bound));
  }
  const auto zero = singular_series(Tuple::parse("1,2"));
  o.check(zero.value == 0.0 && !zero.admissible, "S({1,2}) = 0 exactly, inadmissible");
  return o;
}

// --- 6 -----------------------------------------------------------------------

Outcome gallagher_trend() {
  Outcome o;
  const auto r50 = gallagher_sum(2, 50);
  const auto r200 = gallagher_sum(2, 200);
  o.note(fmt("ratio(h=50) = %.17g, ratio(h=200) = %.17g", r50.ratio, r200.ratio));
  o.check(std::abs(r200.ratio - 1) < std::abs(r50.ratio - 1), "|ratio - 1| shrinks from h=50 to h=200");
  const double snapshot = 0.96644216042649977174;
  o.check(rel(r200.ratio, snapshot) <= 1e-9, fmt("ratio(h=200) matches snapshot %.17g (rel %.2g, tol 1e-9)", snapshot,
                                                  rel(r200.ratio, snapshot)));
  return o;
}

// --- 7 -----------------------------------------------------------------------

Outcome moment_bands() {
  Outcome o;
  const std::uint64_t N = 10'000'000;
  const auto tables = build_tables(1, 2 * N + 8);
  const Tuple t = Tuple::parse("1,3");
  WeightParams p;
  p.N = N;
  p.R = std::pow(static_cast<double>(N), 0.25);
  p.k = 2;
  p.ell = 1;
  // Frozen from tests/oracles/moments_oracle.py.
  struct Row {
    const char* name;
    MomentReport report;
    double snapshot;
  };
  const Row rows[] = {
      {"sum Lambda^2", moment_lambda_sq(t, p, tables), 273777195.10046136},
      {"sum Lambda^2 theta(n+1), h0 in H", moment_lambda_sq_theta(t, 1, p, tables), 673925743.8064461},
      {"sum Lambda^2 theta(n+7), h0 not in H", moment_lambda_sq_theta(t, 7, p, tables), 538579553.8302401},
  };
  for (const auto& r : rows) {
    o.check(r.report.ratio >= 0.4 && r.report.ratio <= 2.5, fmt("%s: ratio %.6f in [0.4, 2.5]", r.name, r.report.ratio));
    o.check(rel(r.report.empirical, r.snapshot) <= 1e-9,
            fmt("%s: empirical %.17g vs snapshot (rel %.2g, tol 1e-9)", r.name, r.report.empirical, rel(r.report.empirical, r.snapshot)));
  }
  return o;
}

// --- 8 -----------------------------------------------------------------------

Outcome main_term_identity() {
  Outcome o;
  const std::int64_t ks[] = {1, 2, 3, 5, 7};
  const double hs[] = {2.0, 5.0, 10.0, 20.0};
  const double Ns[] = {1e4, 1e6, 1e8, 1e10, 1e12};
  int points = 0;
  double worst = 0;
  for (auto k : ks) {
    for (auto h : hs) {
      for (auto N : Ns) {
        const std::int64_t ell = points % k;
        const double log_R = (0.2 + 0.0125 * (points % 5)) * std::log(N);
        const auto a = assemble_main_term_gallagher(k, ell, h, log_R, std::log(3 * N), 1 + points % 2, N);
        worst = std::max(worst, a.relative_gap);
        ++points;
      }
    }
  }
  o.check(points == 100 && worst < 1e-12, fmt("%d grid points, max |assembled/closed - 1| = %.3g (tol 1e-12)", points, worst));
  return o;
}

// --- 9 -----------------------------------------------------------------------

Outcome gap_statistics() {
  Outcome o;
  const auto tables = build_tables(1, 10'000'400);
  const auto big = gap_distribution(1'000'000, {10.0}, 1, tables);
  o.check(big.fraction(0) >= 0.99, fmt("P(10^6, 10) = %.6f >= 0.99", big.fraction(0)));

  bool monotone = true;
  for (std::uint64_t x : {100'000ull, 1'000'000ull, 10'000'000ull})
    for (int nu : {1, 2}) {
      const auto g = gap_distribution(x, geometric_grid(0.05, 2.0, 20), nu, tables);
      for (std::size_t i = 1; i < g.counts.size(); ++i) monotone = monotone && g.counts[i] >= g.counts[i - 1];
    }
  o.check(monotone, "P non-decreasing in eta for x in {1e5, 1e6, 1e7}, nu in {1, 2}, default grid");

  bool recount = true;
  for (double h : {10.0, 20.0, 40.0})
    for (int nu : {1, 2}) {
      const std::uint64_t N = 10'000;
      std::uint64_t brute = 0;
      for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
        int c = 0;
        for (std::uint64_t j = 1; j <= static_cast<std::uint64_t>(h); ++j) c += tables.is_prime(n + j);
        brute += c > nu;
      }
      recount = recount && brute == q_nu(N, h, nu, tables);
    }
  o.check(recount, "Q_nu sliding window == brute-force recount on [10^4+1, 2*10^4], h in {10,20,40}, nu in {1,2}");

  for (double h : {10.0, 20.0, 40.0})
    for (int nu : {1, 2}) {
      const auto b = gaps_from_q(1'000'000, h, nu, tables);
      o.check(b.bridge_ok && b.q <= static_cast<std::uint64_t>(h) * b.gap_count + b.endpoint_correction,
              fmt("N=10^6 h=%g nu=%d: Q=%llu <= h*%llu + %llu", h, nu, (unsigned long long)b.q,
                  (unsigned long long)b.gap_count, (unsigned long long)b.endpoint_correction));
    }
  return o;
}

// --- 10 ----------------------------------------------------------------------

Outcome gap_density_shadow() {
  Outcome o;
  const std::uint64_t x = 10'000'000;
  const auto tables = build_tables(1, x + 400);
  const auto g = gap_distribution(x, {0.05, 0.1, 0.2}, 1, tables);
  const std::uint64_t snapshot[] = {0, 0, 58608};
  bool matches = true;
  double lo = INFINITY, hi = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double v = g.fraction(i) / g.eta_grid[i];
    o.note(fmt("eta=%.2f: count %llu, P/eta = %.6g", g.eta_grid[i], (unsigned long long)g.counts[i], v));
    matches = matches && g.counts[i] == snapshot[i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  o.check(matches, "counts match snapshot {0, 0, 58608}");
  o.check(lo > 0 && hi / lo < 3, fmt("max/min of P/eta over {0.05, 0.1, 0.2} = %g (need < 3)", lo > 0 ? hi / lo : INFINITY));
  if (lo == 0) {
    o.note(fmt("eta log x < 2 for eta <= 0.1 at x = 10^7 (2/log x = %.4f); no gap can qualify", 2 / std::log(double(x))));
    const auto reg = gap_distribution(x, {0.2, 0.4, 0.8}, 1, tables);
    double a = INFINITY, b = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double v = reg.fraction(i) / reg.eta_grid[i];
      a = std::min(a, v);
      b = std::max(b, v);
    }
    o.note(fmt("same check on eta in {0.2, 0.4, 0.8}: max/min P/eta = %.4f", b / a));
  }
  return o;
}

// --- 11 ----------------------------------------------------------------------

Outcome selberg_bound() {
  Outcome o;
  const auto tables = build_tables(1, 2'000'004);
  const Tuple t = Tuple::parse("1,3");
  for (double z : {30.0, 100.0}) {
    const auto r = selberg_count(t, z, 1'000'000, tables, 0.5);
    o.check(r.within_bound.value_or(false) && r.empirical <= r.predicted_main_term * 1.5,
            fmt("z=%g: count %.0f <= 1.5 * %.1f (ratio %.4f)", z, r.empirical, r.predicted_main_term, r.ratio));
  }
  return o;
}

// --- 12 ----------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::vector<std::string>> runs = {
      {"thresholds", "--min-k", "--m-value", "--theta0", "0.953", "--k", "7", "--ell", "1"},
      {"thresholds", "--c2-check", "--k-max", "10000"},
      {"weight", "--n", "9973", "--tuple", "1,3,7", "--R", "1000", "--ell", "1", "--oracle"},
      {"weight", "--n", "1500000", "--tuple", "1,3", "--R", "27.54", "--ell", "1", "--N", "1000000"},
      {"singular", "--tuple", "1,3", "--tol", "1e-8"},
      {"enumerate", "--k", "2", "--h", "200", "--gallagher", "--max-list", "0"},
      {"moments", "--kind", "lambda-sq", "--N", "10000000"},
      {"moments", "--kind", "theta", "--h0", "1,7", "--N", "10000000"},
      {"big-s", "--k", "2", "--h", "10", "--N", "20000"},
      {"gaps", "--mode", "bridge", "--N", "1000000", "--h", "20", "--nu", "2"},
      {"gaps", "--x", "10000000", "--eta-grid", "0.05:0.2:3", "--format", "csv"},
      {"moments", "--kind", "selberg", "--N", "1000000", "--z", "30,100"},
  };
  const auto dir = std::filesystem::temp_directory_path() / "smallgaps_acceptance";
  std::filesystem::create_directories(dir);
  int index = 0;
  for (const auto& args : runs) {
    const auto out1 = dir / fmt("%d_t1.out", index);
    const auto out3 = dir / fmt("%d_t3.out", index);
    const auto replay = dir / fmt("%d_replay.out", index);
    const auto manifest = dir / fmt("%d.manifest", index);
    ++index;
    auto invoke = [&](std::vector<std::string> head) {
      head.insert(head.begin(), "smallgaps");
      std::ostringstream out, err;
      return cli::main_entry(head, out, err);
    };
    std::vector<std::string> a = {"--threads", "1", "-o", out1.string(), "--manifest-out", manifest.string()};
    a.insert(a.end(), args.begin(), args.end());
    std::vector<std::string> b = {"--threads", "3", "-o", out3.string()};
    b.insert(b.end(), args.begin(), args.end());
    const int ca = invoke(a), cb = invoke(b);
    const int cc = invoke({"--threads", "2", "-o", replay.string(), "--config", manifest.string()});
    const std::string s1 = slurp(out1);
    const bool ok = ca == 0 && cb == 0 && cc == 0 && !s1.empty() && s1 == slurp(out3) && s1 == slurp(replay);
    std::string line;
    for (const auto& w : args) line += w + " ";
    o.check(ok, fmt("%s(threads 1 == threads 3 == manifest replay, %zu bytes)", line.c_str(), s1.size()));
  }
  std::filesystem::remove_all(dir);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "threshold exactness", 1, threshold_exactness},
      {2, "c2 verification", 1, c2_verification},
      {3, "weight oracle equivalence", 300, weight_oracle},
      {4, "pointwise bound", 300, pointwise_bound},
      {5, "singular series", 600, singular_series_check},
      {6, "Gallagher trend", 600, gallagher_trend},
      {7, "moment sanity bands", 1800, moment_bands},
      {8, "main-term identity", 1, main_term_identity},
      {9, "gap statistics", 600, gap_statistics},
      {10, "P/eta shadow", 900, gap_density_shadow},
      {11, "Selberg bound", 300, selberg_bound},
      {12, "determinism", 1800, determinism},
  };
  return all;
}

bool run_one(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(elapsed < c.limit_seconds, fmt("runtime %.3f s < %g s", elapsed, c.limit_seconds));
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << '\n';
  for (const auto& d : o.details) std::cout << "    " << d << '\n';
  std::cout.flush();
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  bool ok = true;
  bool found = false;
  for (const auto& c : criteria()) {
    if (which == "all" || which == std::to_string(c.id)) {
      found = true;
      ok = run_one(c) && ok;
    }
  }
  if (!found) {
    std::cerr << "usage: acceptance [1-12|all]\n";
    return 2;
  }
  return ok ? 0 : 1;
}
