#include "twogroup/welch.hpp"

#include <cmath>
#include <numbers>

#include "twogroup/special.hpp"

namespace twogroup {

double student_t_pdf(double x, double dof) {
  if (!(dof > 0.0)) fail(errc::invalid_params, "student_t_pdf requires dof > 0");
  const double half = 0.5 * (dof + 1.0);
  const double log_norm = special::log_gamma(half) - special::log_gamma(0.5 * dof) -
                          0.5 * std::log(dof * std::numbers::pi);
  return std::exp(log_norm - half * std::log1p(x * x / dof));
}

double student_t_cdf(double x, double dof) {
  if (!(dof > 0.0)) fail(errc::invalid_params, "student_t_cdf requires dof > 0");
  if (x == 0.0) return 0.5;
  const double u = dof / (dof + x * x);
  const double tail = 0.5 * special::incomplete_beta(0.5 * dof, 0.5, u);
  return x > 0.0 ? 1.0 - tail : tail;
}

double t_quantile(double p, double dof) {
  if (!(dof > 0.0)) fail(errc::invalid_params, "t_quantile requires dof > 0");
  if (!(p > 0.0 && p < 1.0)) fail(errc::invalid_params, "t_quantile requires p in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, dof);

  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf(hi, dof) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) break;
  }

  // Newton iteration on CDF(x) - p, falling back to bisection whenever
  // a step leaves the bracket. The CDF is strictly increasing, so the
  // bracket contracts monotonically.
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 128; ++iter) {
    const double err = student_t_cdf(x, dof) - p;
    if (err == 0.0) break;
    if (err > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double deriv = student_t_pdf(x, dof);
    double next = deriv > 0.0 ? x - err / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-12 * (1.0 + std::abs(next))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

WelchResult welch_infer(const TwoGroupSample& sample, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::invalid_params, "alpha must lie in (0, 1)");
  validate(sample);
  const GroupSummary s0 = summarize(sample.y0);
  const GroupSummary s1 = summarize(sample.y1);
  const double var0 = sample_variance(sample.y0, s0.mean);
  const double var1 = sample_variance(sample.y1, s1.mean);
  if (!(var0 > 0.0) || !(var1 > 0.0)) {
    fail(errc::degenerate_group, "a group variance is zero, the t interval is undefined");
  }

  const double n0 = static_cast<double>(s0.n);
  const double n1 = static_cast<double>(s1.n);
  const double w0 = var0 / n0;
  const double w1 = var1 / n1;
  const double se2 = w0 + w1;
  const double dof = se2 * se2 / (w0 * w0 / (n0 - 1.0) + w1 * w1 / (n1 - 1.0));

  WelchResult r;
  r.delta_hat = s1.mean - s0.mean;
  r.std_err = std::sqrt(se2);
  r.dof = dof;
  const double half_width = t_quantile(1.0 - 0.5 * alpha, dof) * r.std_err;
  r.interval = ConfidenceInterval::centered(r.delta_hat, half_width);
  r.significant = std::abs(r.delta_hat) > half_width;
  return r;
}

}  // namespace twogroup
