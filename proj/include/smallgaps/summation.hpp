#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace smallgaps {

// Streaming pairwise summation. Values are combined like a binary counter,
// so the rounding pattern depends only on the order of the pushed values.
class PairwiseSum {
 public:
  void add(double x) {
    double carry = x;
    std::size_t level = 0;
    while (used_ & (std::uint64_t{1} << level)) {
      carry = slots_[level] + carry;
      used_ &= ~(std::uint64_t{1} << level);
      ++level;
    }
    slots_[level] = carry;
    used_ |= std::uint64_t{1} << level;
    ++count_;
  }

  double total() const {
    double acc = 0.0;
    bool first = true;
    for (std::size_t level = 0; level < slots_.size(); ++level) {
      if (!(used_ & (std::uint64_t{1} << level))) continue;
      acc = first ? slots_[level] : slots_[level] + acc;
      first = false;
    }
    return acc;
  }

  std::uint64_t count() const { return count_; }

 private:
  std::array<double, 64> slots_{};
  std::uint64_t used_ = 0;
  std::uint64_t count_ = 0;
};

inline double pairwise_sum(std::span<const double> values) {
  PairwiseSum s;
  for (double v : values) s.add(v);
  return s.total();
}

}  // namespace smallgaps
