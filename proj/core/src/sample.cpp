#include "twogroup/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twogroup {
namespace {

// Kahan-Babuska (Neumaier) compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void validate_group(std::span<const double> y, const char* name) {
  if (y.size() < 2) {
    fail(errc::too_few_samples, std::string(name) + " has " + std::to_string(y.size()) +
                                    " observation(s), need at least 2");
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      fail(errc::non_finite_value, std::string(name) + " contains a non-finite value");
    }
  }
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*lo == *hi) {
    fail(errc::degenerate_group, std::string(name) + " is constant, every entry equals " +
                                     std::to_string(*lo));
  }
}

}  // namespace

GroupSummary summarize(std::span<const double> y) {
  if (y.empty()) fail(errc::invalid_sample, "cannot summarize an empty group");
  CompensatedSum sum;
  CompensatedSum sumsq;
  for (double v : y) {
    sum.add(v);
    sumsq.add(v * v);
  }
  GroupSummary s;
  s.n = y.size();
  s.sum = sum.value();
  s.sumsq = sumsq.value();
  s.mean = s.sum / static_cast<double>(s.n);
  return s;
}

double sample_variance(std::span<const double> y, double mean) {
  if (y.size() < 2) fail(errc::too_few_samples, "sample variance needs at least 2 observations");
  CompensatedSum acc;
  for (double v : y) {
    const double d = v - mean;
    acc.add(d * d);
  }
  return acc.value() / static_cast<double>(y.size() - 1);
}

void validate(const TwoGroupSample& sample) {
  validate_group(sample.y0, "group 0");
  validate_group(sample.y1, "group 1");
}

}  // namespace twogroup
