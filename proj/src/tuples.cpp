#include "smallgaps/tuples.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "smallgaps/primes.hpp"
#include "smallgaps/summation.hpp"

namespace smallgaps {

Tuple::Tuple(std::vector<std::int64_t> elements, std::optional<double> span_h)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw ArgumentError("tuple must have at least one element");
  std::sort(elements_.begin(), elements_.end());
  if (elements_.front() < 1) throw ArgumentError("tuple elements must be positive integers");
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
    throw ArgumentError("tuple elements must be distinct");
  span_h_ = span_h.value_or(static_cast<double>(elements_.back()));
  if (!(std::floor(span_h_) >= static_cast<double>(elements_.back())))
    throw ArgumentError("tuple element exceeds the box size h");
  admissible_ = is_admissible(elements_);
}

Tuple Tuple::parse(std::string_view text) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view field = text.substr(pos, comma - pos);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
      throw ArgumentError("malformed tuple \"" + std::string(text) + "\"");
    out.push_back(v);
    pos = comma + 1;
  }
  return Tuple(std::move(out));
}

bool Tuple::contains(std::int64_t h) const {
  return std::binary_search(elements_.begin(), elements_.end(), h);
}

Tuple Tuple::with(std::int64_t h0) const {
  if (contains(h0)) return *this;
  auto e = elements_;
  e.push_back(h0);
  return Tuple(std::move(e), std::max(span_h_, static_cast<double>(h0)));
}

Tuple Tuple::shifted(std::int64_t c) const {
  auto e = elements_;
  for (auto& x : e) x += c;
  return Tuple(std::move(e));
}

std::string Tuple::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(elements_[i]);
  }
  return s;
}

namespace {

int distinct_residues(std::span<const std::int64_t> elements, std::uint64_t p, std::vector<char>& seen) {
  seen.assign(p, 0);
  int count = 0;
  for (std::int64_t h : elements) {
    const auto r = static_cast<std::uint64_t>(((h % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                              static_cast<std::int64_t>(p));
    if (!seen[r]) {
      seen[r] = 1;
      ++count;
    }
  }
  return count;
}

}  // namespace

int nu_p(const Tuple& t, std::uint64_t p) {
  if (!is_prime_trial(p)) throw ArgumentError("nu_p: " + std::to_string(p) + " is not prime");
  if (p > t.size()) {
    // More classes than elements: count distinct residues without a p-sized table.
    std::vector<std::int64_t> r;
    r.reserve(t.size());
    for (auto h : t.elements()) r.push_back(h % static_cast<std::int64_t>(p));
    std::sort(r.begin(), r.end());
    return static_cast<int>(std::unique(r.begin(), r.end()) - r.begin());
  }
  std::vector<char> seen;
  return distinct_residues(t.elements(), p, seen);
}

bool is_admissible(std::span<const std::int64_t> elements) {
  const std::uint64_t k = elements.size();
  std::vector<char> seen;
  for (std::uint64_t p = 2; p <= k; ++p) {
    if (!is_prime_trial(p)) continue;
    if (static_cast<std::uint64_t>(distinct_residues(elements, p, seen)) == p) return false;
  }
  return true;
}

bool is_admissible(const Tuple& t) { return t.admissible(); }

double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

std::uint64_t default_enumeration_budget() {
  if (const char* env = std::getenv("SMALLGAPS_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 1) return static_cast<std::uint64_t>(v);
  }
  return kDefaultEnumerationBudget;
}

namespace {

// Uniform integer in [0, n) by rejection; independent of the standard
// library's distribution implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

// Floyd's algorithm: uniform k-subset of {1..n}.
std::vector<std::int64_t> sample_subset(std::mt19937_64& rng, std::int64_t n, int k) {
  std::vector<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  for (std::int64_t j = n - k + 1; j <= n; ++j) {
    const auto t = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(j))) + 1;
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
      chosen.push_back(t);
    else
      chosen.push_back(j);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

AdmissibleTupleStream::AdmissibleTupleStream(int k, double h, std::uint64_t budget, std::uint64_t samples,
                                             std::uint64_t seed)
    : h_(h), rng_(seed) {
  if (budget == 0) throw ArgumentError("enumeration budget must be positive");
  if (k < 1) throw ArgumentError("k must be >= 1");
  const auto h_floor = static_cast<std::int64_t>(std::floor(h));
  if (h_floor < k) throw ArgumentError("need floor(h) >= k");
  header_.k = k;
  header_.h_floor = h_floor;
  header_.total_subsets = binomial(h_floor, k);
  header_.seed = seed;
  if (header_.total_subsets > static_cast<double>(budget)) {
    if (samples == 0) throw ArgumentError("sampling mode needs a positive sample count");
    header_.mode = EnumerationMode::sampled;
    header_.samples = samples;
  }
}

bool AdmissibleTupleStream::advance_combination() {
  const int k = header_.k;
  const std::int64_t n = header_.h_floor;
  if (!started_) {
    current_.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) current_[static_cast<std::size_t>(i)] = i + 1;
    started_ = true;
    return true;
  }
  int i = k - 1;
  while (i >= 0 && current_[static_cast<std::size_t>(i)] == n - k + 1 + i) --i;
  if (i < 0) return false;
  ++current_[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) current_[static_cast<std::size_t>(j)] = current_[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

std::optional<Tuple> AdmissibleTupleStream::next() {
  if (done_) return std::nullopt;
  if (header_.mode == EnumerationMode::exhaustive) {
    while (advance_combination()) {
      ++inspected_;
      if (is_admissible(current_)) return Tuple(current_, h_);
    }
  } else {
    while (inspected_ < header_.samples) {
      ++inspected_;
      auto subset = sample_subset(rng_, header_.h_floor, header_.k);
      if (is_admissible(subset)) return Tuple(std::move(subset), h_);
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<Tuple> admissible_with_lead(int k, std::int64_t h_floor, std::int64_t lead) {
  std::vector<Tuple> out;
  if (k < 1 || lead < 1 || lead + k - 1 > h_floor) return out;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(k));
  cur[0] = lead;
  if (k == 1) {
    out.emplace_back(cur, static_cast<double>(h_floor));
    return out;
  }
  for (int i = 1; i < k; ++i) cur[static_cast<std::size_t>(i)] = lead + i;
  for (;;) {
    if (is_admissible(cur)) out.emplace_back(cur, static_cast<double>(h_floor));
    int i = k - 1;
    while (i >= 1 && cur[static_cast<std::size_t>(i)] == h_floor - k + 1 + i) --i;
    if (i < 1) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

GallagherResult gallagher_sum(int k, double h, std::uint64_t budget, double rel_tol, const Exec& exec) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  const auto h_floor = static_cast<std::int64_t>(std::floor(h));
  if (h_floor < k) throw ArgumentError("need floor(h) >= k");
  if (binomial(h_floor, k) > static_cast<double>(budget))
    throw BudgetError("gallagher_sum: C(" + std::to_string(h_floor) + "," + std::to_string(k) +
                      ") exceeds enumeration budget " + std::to_string(budget));

  const std::int64_t leads = h_floor - k + 1;
  std::vector<double> lead_sum(static_cast<std::size_t>(leads), 0.0);
  std::vector<std::uint64_t> lead_count(static_cast<std::size_t>(leads), 0);
  parallel_for(static_cast<std::uint64_t>(leads), exec, [&](std::uint64_t i) {
    PairwiseSum s;
    auto tuples = admissible_with_lead(k, h_floor, static_cast<std::int64_t>(i) + 1);
    for (const auto& t : tuples) s.add(singular_series(t, rel_tol).value);
    lead_sum[i] = s.total();
    lead_count[i] = tuples.size();
  });

  GallagherResult r;
  r.sum = pairwise_sum(lead_sum);
  for (auto c : lead_count) r.admissible_count += c;
  r.inspected = static_cast<std::uint64_t>(binomial(h_floor, k));
  r.predicted = std::pow(h, k) / factorial(k);
  r.ratio = r.sum / r.predicted;
  return r;
}

GallagherResult gallagher_sum_sampled(int k, double h, std::uint64_t samples, std::uint64_t seed,
                                      double rel_tol) {
  if (samples < 2) throw ArgumentError("need at least two samples");
  AdmissibleTupleStream stream(k, h, 1, samples, seed);
  // A single subset cannot be sampled meaningfully; the exact sum is trivial.
  if (stream.header().mode == EnumerationMode::exhaustive) return gallagher_sum(k, h, 1, rel_tol);
  const std::int64_t h_floor = stream.header().h_floor;
  const double total = binomial(h_floor, k);
  // Rejected (inadmissible) draws contribute zeros to the mean.
  PairwiseSum s, s2;
  std::uint64_t admissible = 0;
  while (auto t = stream.next()) {
    const double v = singular_series(*t, rel_tol).value;
    s.add(v);
    s2.add(v * v);
    ++admissible;
  }
  const double n = static_cast<double>(stream.inspected());
  const double mean = s.total() / n;
  const double var = std::max(0.0, (s2.total() - n * mean * mean) / (n - 1));

  GallagherResult r;
  r.mode = EnumerationMode::sampled;
  r.sum = total * mean;
  r.std_error = total * std::sqrt(var / n);
  r.admissible_count = admissible;
  r.inspected = stream.inspected();
  r.predicted = std::pow(h, k) / factorial(k);
  r.ratio = r.sum / r.predicted;
  return r;
}

}  // namespace smallgaps
