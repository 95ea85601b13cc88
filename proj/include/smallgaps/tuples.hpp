#pragma once

// Prime k-tuple patterns H = {h_1 < ... < h_k}, admissibility, the
// Hardy-Littlewood singular series and admissible-tuple enumeration.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smallgaps/errors.hpp"
#include "smallgaps/parallel.hpp"

namespace smallgaps {

class Tuple {
 public:
  // Sorts the elements. Rejects duplicates, non-positive entries and an
  // empty set. span_h defaults to the largest element and must be >= it.
  explicit Tuple(std::vector<std::int64_t> elements, std::optional<double> span_h = std::nullopt);

  // Parses "1,3,7" (whitespace tolerated).
  static Tuple parse(std::string_view text);

  std::span<const std::int64_t> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  int k() const { return static_cast<int>(elements_.size()); }
  double span_h() const { return span_h_; }
  std::int64_t front() const { return elements_.front(); }
  std::int64_t back() const { return elements_.back(); }
  bool contains(std::int64_t h) const;
  bool admissible() const { return admissible_; }

  // H union {h0}; returns *this unchanged when h0 is already present.
  Tuple with(std::int64_t h0) const;
  // Every element shifted by c (result must stay positive).
  Tuple shifted(std::int64_t c) const;

  std::string to_string() const;

  friend bool operator==(const Tuple& a, const Tuple& b) { return a.elements_ == b.elements_; }

 private:
  std::vector<std::int64_t> elements_;
  double span_h_ = 0;
  bool admissible_ = false;
};

// Number of distinct residues of H modulo the prime p.
int nu_p(const Tuple& t, std::uint64_t p);

// nu_p(H) < p for every prime p <= k.
bool is_admissible(const Tuple& t);
bool is_admissible(std::span<const std::int64_t> sorted_elements);

struct SingularSeriesValue {
  double value = 0;
  std::uint64_t cutoff_prime = 0;
  double tail_error_bound = 0;
  bool admissible = false;
};

inline constexpr double kDefaultSingularTolerance = 1e-9;

// Product over p <= cutoff done explicitly in log space; the tail over
// p > cutoff (where nu_p = k) is summed through prime zeta values.
// tail_error_bound bounds |log(true) - log(value)| and is <= rel_tol.
SingularSeriesValue singular_series(const Tuple& t, double rel_tol = kDefaultSingularTolerance);

// Prime zeta function P(s) = sum_p p^-s for integer s >= 2.
double prime_zeta(int s);

enum class EnumerationMode { exhaustive, sampled };

struct EnumerationHeader {
  EnumerationMode mode = EnumerationMode::exhaustive;
  int k = 0;
  std::int64_t h_floor = 0;
  double total_subsets = 0;  // C(floor h, k)
  std::uint64_t samples = 0;  // draws in sampled mode
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;
inline constexpr std::uint64_t kDefaultSampleCount = 100'000;

std::uint64_t default_enumeration_budget();  // honours SMALLGAPS_BUDGET

double binomial(std::int64_t n, std::int64_t k);

// Admissible k-subsets of {1..floor h}. Exhaustive lexicographic order when
// C(floor h, k) <= budget; otherwise `samples` uniform k-subsets are drawn
// and the admissible ones are yielded in draw order.
class AdmissibleTupleStream {
 public:
  AdmissibleTupleStream(int k, double h, std::uint64_t budget = default_enumeration_budget(),
                        std::uint64_t samples = kDefaultSampleCount, std::uint64_t seed = 1);

  const EnumerationHeader& header() const { return header_; }
  std::optional<Tuple> next();
  // Subsets inspected so far (draws in sampled mode).
  std::uint64_t inspected() const { return inspected_; }

 private:
  bool advance_combination();

  EnumerationHeader header_;
  double h_;
  std::vector<std::int64_t> current_;
  bool started_ = false;
  bool done_ = false;
  std::uint64_t inspected_ = 0;
  std::mt19937_64 rng_;
};

// Every admissible k-subset of {1..floor h} starting with `lead`, ascending.
std::vector<Tuple> admissible_with_lead(int k, std::int64_t h_floor, std::int64_t lead);

struct GallagherResult {
  double sum = 0;
  double predicted = 0;  // h^k / k!
  double ratio = 0;
  EnumerationMode mode = EnumerationMode::exhaustive;
  double std_error = 0;  // sampled mode only
  std::uint64_t admissible_count = 0;
  std::uint64_t inspected = 0;
};

// Sum of singular series over admissible H in {1..floor h} against h^k/k!.
// Throws BudgetError when C(floor h, k) > budget.
GallagherResult gallagher_sum(int k, double h, std::uint64_t budget = default_enumeration_budget(),
                              double rel_tol = kDefaultSingularTolerance, const Exec& exec = {});

// Monte-Carlo estimate C(floor h, k) * mean(S(random k-subset)).
GallagherResult gallagher_sum_sampled(int k, double h, std::uint64_t samples, std::uint64_t seed,
                                      double rel_tol = kDefaultSingularTolerance);

}  // namespace smallgaps
