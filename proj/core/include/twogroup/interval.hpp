#pragma once

#include <cmath>

namespace twogroup {

/// Symmetric interval around an effect estimate. The interval is open:
/// it contains x iff |x - center| < half_width. An Empty interval
/// contains nothing and signals data too uninformative to separate the
/// effect from noise.
class ConfidenceInterval {
 public:
  enum class Kind { empty, nonempty };

  static ConfidenceInterval make_empty() noexcept { return ConfidenceInterval(); }

  static ConfidenceInterval centered(double center, double half_width) noexcept {
    ConfidenceInterval ci;
    ci.kind_ = Kind::nonempty;
    ci.center_ = center;
    ci.half_width_ = half_width;
    return ci;
  }

  Kind kind() const noexcept { return kind_; }
  bool empty() const noexcept { return kind_ == Kind::empty; }
  double center() const noexcept { return center_; }
  double half_width() const noexcept { return half_width_; }
  double lo() const noexcept { return center_ - half_width_; }
  double hi() const noexcept { return center_ + half_width_; }

  bool contains(double x) const noexcept {
    return kind_ == Kind::nonempty && std::abs(x - center_) < half_width_;
  }

 private:
  Kind kind_ = Kind::empty;
  double center_ = 0.0;
  double half_width_ = 0.0;
};

}  // namespace twogroup
