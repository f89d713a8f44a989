#pragma once

namespace twogroup::special {

/// Natural log of the gamma function for x > 0 (Lanczos approximation,
/// about 1e-15 relative accuracy).
double log_gamma(double x);

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
/// x in [0, 1], evaluated by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Standard-normal quantile for p in (0, 1).
double normal_quantile(double p);

}  // namespace twogroup::special
