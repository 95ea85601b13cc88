#pragma once

// Empirical statistics of gaps between consecutive primes.

#include <cstdint>
#include <vector>

#include "smallgaps/parallel.hpp"
#include "smallgaps/primes.hpp"

namespace smallgaps {

struct GapDistribution {
  std::uint64_t x = 0;
  std::vector<double> eta_grid;
  std::vector<std::uint64_t> counts;  // p_n <= x with p_{n+nu} - p_n <= eta log p_n
  std::uint64_t pi_x = 0;
  int nu = 1;

  double fraction(std::size_t i) const {
    return pi_x ? static_cast<double>(counts[i]) / static_cast<double>(pi_x) : 0.0;
  }
};

// Geometric grid from start to end with `count` points (count >= 2, or a
// single point when start == end).
std::vector<double> geometric_grid(double start, double end, std::size_t count);

// The successor p_{n+nu} may exceed x; the tables must reach it.
GapDistribution gap_distribution(std::uint64_t x, std::vector<double> eta_grid, int nu, const PrimeTables& tables);

struct IntervalStats {
  double theta = 0;        // sum_{1 <= j <= floor h} theta(n + j)
  std::uint64_t count = 0; // primes in (n, n + floor h]
};

IntervalStats interval_stats(std::uint64_t n, double h, const PrimeTables& tables);

// #{n in [N+1, 2N] : pi(n, h) > nu}, by a sliding window.
std::uint64_t q_nu(std::uint64_t N, double h, int nu, const PrimeTables& tables);

struct GapBridge {
  std::uint64_t gap_count = 0;           // p_j in (N, 2N] with p_{j+nu} - p_j <= h
  std::uint64_t q = 0;                   // Q_nu(N, h)
  std::uint64_t endpoint_correction = 0; // counted n whose first prime lies beyond 2N
  std::uint64_t max_per_gap = 0;         // most n attributed to a single gap
  bool bridge_ok = false;                // q <= h gap_count + endpoint_correction
};

// Attributes each n counted by Q_nu to the first prime p_j > n; a gap
// p_{j+nu} - p_j <= h can absorb fewer than floor h values of n.
GapBridge gaps_from_q(std::uint64_t N, double h, int nu, const PrimeTables& tables);

// 1 - e^{-eta}.
double poisson_model(double eta);

struct PairCount {
  std::uint64_t pairs = 0;  // (p, p'), x < p < p' <= 2x, p' - p <= h
  double bound_scale = 0;   // pairs (log x)^2 / (h x)
};

PairCount pair_count_bound(std::uint64_t x, double h, const PrimeTables& tables);

}  // namespace smallgaps
