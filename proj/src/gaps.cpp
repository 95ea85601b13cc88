#include "smallgaps/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace smallgaps {

std::vector<double> geometric_grid(double start, double end, std::size_t count) {
  if (!(start > 0.0) || !(end >= start)) throw ArgumentError("eta grid needs 0 < start <= end");
  if (count == 0) throw ArgumentError("eta grid needs at least one point");
  if (count == 1) {
    if (start != end) throw ArgumentError("a one-point eta grid needs start == end");
    return {start};
  }
  std::vector<double> grid(count);
  const double step = std::log(end / start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start * std::exp(step * static_cast<double>(i));
  grid.front() = start;
  grid.back() = end;
  return grid;
}

GapDistribution gap_distribution(std::uint64_t x, std::vector<double> eta_grid, int nu, const PrimeTables& tables) {
  if (nu != 1 && nu != 2) throw ArgumentError("gap_distribution: nu must be 1 or 2");
  if (x > tables.hi()) throw RangeError("gap_distribution: x beyond sieved limit");
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!(eta_grid[i] >= 0.0)) throw ArgumentError("eta values must be non-negative");
    if (i && eta_grid[i] < eta_grid[i - 1]) throw ArgumentError("eta grid must be ascending");
  }
  GapDistribution g;
  g.x = x;
  g.nu = nu;
  g.eta_grid = std::move(eta_grid);
  g.counts.assign(g.eta_grid.size(), 0);
  g.pi_x = tables.count_through(x);

  // first[j]: number of primes whose smallest qualifying grid index is j.
  std::vector<std::uint64_t> first(g.eta_grid.size() + 1, 0);
  std::deque<std::uint64_t> ahead;  // the next nu primes after p
  std::uint64_t p = tables.next_prime_after(tables.lo() - 1);
  auto next_of = [&](std::uint64_t q) {
    const std::uint64_t r = tables.next_prime_after(q);
    if (r == 0) throw RangeError("gap_distribution: successor of " + std::to_string(q) + " lies beyond the tables");
    return r;
  };
  if (p == 0 || p > x) return g;
  std::uint64_t last = p;
  for (int i = 0; i < nu; ++i) ahead.push_back(last = next_of(last));
  while (p != 0 && p <= x) {
    const double gap = static_cast<double>(ahead.back() - p);
    const double logp = std::log(static_cast<double>(p));
    // Smallest j with gap <= eta_j log p; monotone in eta.
    const auto it = std::partition_point(g.eta_grid.begin(), g.eta_grid.end(),
                                         [&](double eta) { return !(gap <= eta * logp); });
    ++first[static_cast<std::size_t>(it - g.eta_grid.begin())];
    p = ahead.front();
    ahead.pop_front();
    if (p > x) break;
    ahead.push_back(last = next_of(last));
  }
  std::uint64_t running = 0;
  for (std::size_t j = 0; j < g.eta_grid.size(); ++j) g.counts[j] = running += first[j];
  return g;
}

IntervalStats interval_stats(std::uint64_t n, double h, const PrimeTables& tables) {
  IntervalStats s;
  if (!(h >= 1.0)) return s;
  const auto span = static_cast<std::uint64_t>(std::floor(h));
  if (!tables.contains(n + 1) || !tables.contains(n + span)) throw RangeError("interval_stats: (n, n+h] outside tables");
  for (std::uint64_t j = 1; j <= span; ++j) {
    if (tables.is_prime_unchecked(n + j)) {
      ++s.count;
      s.theta += std::log(static_cast<double>(n + j));
    }
  }
  return s;
}

namespace {

void require_q_window(std::uint64_t N, std::uint64_t span, const PrimeTables& tables) {
  if (N < 1) throw ArgumentError("N must be positive");
  if (!tables.contains(N + 2) || !tables.contains(2 * N + span))
    throw RangeError("window (N, 2N + floor h] not covered by tables");
}

}  // namespace

std::uint64_t q_nu(std::uint64_t N, double h, int nu, const PrimeTables& tables) {
  if (nu < 0) throw ArgumentError("q_nu: nu must be non-negative");
  if (!(h >= 1.0)) return 0;
  const auto span = static_cast<std::uint64_t>(std::floor(h));
  require_q_window(N, span, tables);
  std::uint64_t in_window = 0;  // primes in (n, n + span]
  for (std::uint64_t m = N + 2; m <= N + 1 + span; ++m) in_window += tables.is_prime_unchecked(m);
  std::uint64_t q = 0;
  for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
    if (in_window > static_cast<std::uint64_t>(nu)) ++q;
    // Slide (n, n+span] -> (n+1, n+1+span].
    if (n == 2 * N) break;
    in_window -= tables.is_prime_unchecked(n + 1);
    in_window += tables.is_prime_unchecked(n + 1 + span);
  }
  return q;
}

GapBridge gaps_from_q(std::uint64_t N, double h, int nu, const PrimeTables& tables) {
  if (nu < 1) throw ArgumentError("gaps_from_q: nu must be positive");
  if (!(h >= 1.0)) throw ArgumentError("gaps_from_q: h must be at least 1");
  const auto span = static_cast<std::uint64_t>(std::floor(h));
  require_q_window(N, span, tables);

  GapBridge b;
  b.q = q_nu(N, h, nu, tables);

  // Primes in (N, 2N + span] in order.
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = tables.next_prime_after(N); p != 0 && p <= 2 * N + span; p = tables.next_prime_after(p))
    primes.push_back(p);
  const auto nu_u = static_cast<std::size_t>(nu);
  // A successor beyond 2N + span is more than floor(h) away, so it cannot qualify.
  for (std::size_t j = 0; j < primes.size() && primes[j] <= 2 * N; ++j)
    if (j + nu_u < primes.size() && static_cast<double>(primes[j + nu_u] - primes[j]) <= h) ++b.gap_count;

  // Attribution: every counted n maps to p_j = first prime > n.
  std::vector<std::uint64_t> per_gap(primes.size(), 0);
  std::size_t j = 0;
  for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
    while (j < primes.size() && primes[j] <= n) ++j;
    if (j + nu_u >= primes.size() || primes[j + nu_u] > n + span) continue;  // pi(n, h) <= nu
    if (primes[j] > 2 * N)
      ++b.endpoint_correction;
    else
      ++per_gap[j];
  }
  for (auto c : per_gap) b.max_per_gap = std::max(b.max_per_gap, c);
  if (b.endpoint_correction > 2 * span)
    throw InvariantError("gaps_from_q: endpoint correction exceeds 2 floor(h)");
  if (b.max_per_gap > span) throw InvariantError("gaps_from_q: a gap absorbed more than floor(h) values of n");
  b.bridge_ok = static_cast<double>(b.q) <= h * static_cast<double>(b.gap_count) + static_cast<double>(b.endpoint_correction);
  return b;
}

double poisson_model(double eta) {
  if (!(eta >= 0.0)) throw ArgumentError("poisson_model: eta must be non-negative");
  return -std::expm1(-eta);
}

PairCount pair_count_bound(std::uint64_t x, double h, const PrimeTables& tables) {
  if (x < 2) throw ArgumentError("pair_count_bound: x must be at least 2");
  if (!(h > 0.0)) throw ArgumentError("pair_count_bound: h must be positive");
  if (!tables.contains(x + 1) || !tables.contains(2 * x)) throw RangeError("pair_count_bound: (x, 2x] outside tables");
  PairCount c;
  std::deque<std::uint64_t> window;
  for (std::uint64_t p = tables.next_prime_after(x); p != 0 && p <= 2 * x; p = tables.next_prime_after(p)) {
    while (!window.empty() && static_cast<double>(p - window.front()) > h) window.pop_front();
    c.pairs += window.size();
    window.push_back(p);
  }
  const double lx = std::log(static_cast<double>(x));
  c.bound_scale = static_cast<double>(c.pairs) * lx * lx / (h * static_cast<double>(x));
  return c;
}

}  // namespace smallgaps
