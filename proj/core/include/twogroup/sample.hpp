#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "twogroup/errors.hpp"

namespace twogroup {

/// Raw observations for the two groups: y0 is the reference group, y1
/// the group whose shift away from the overall mean is of interest.
struct TwoGroupSample {
  std::vector<double> y0;
  std::vector<double> y1;

  std::size_t n0() const noexcept { return y0.size(); }
  std::size_t n1() const noexcept { return y1.size(); }
};

/// Sufficient statistics of one group. Sums are accumulated with
/// compensated summation so that batches of thousands of fits do not
/// leak accumulation error into significance decisions.
struct GroupSummary {
  std::size_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;  // sum of squared observations
  double mean = 0.0;
};

/// One-pass summary of a group. Throws InvalidSample on empty input.
GroupSummary summarize(std::span<const double> y);

/// Unbiased sample variance (divisor n - 1), two-pass about the given
/// mean. Requires at least two observations.
double sample_variance(std::span<const double> y, double mean);

/// Accepts a sample iff both groups have n >= 2, every entry is finite
/// and neither group is constant. Throws TooFewSamples, NonFiniteValue
/// or DegenerateGroup accordingly.
void validate(const TwoGroupSample& sample);

}  // namespace twogroup
