#include "twogroup/inference.hpp"

#include <cmath>

namespace twogroup {

double effect_estimate(const GroupSummary& s1, const NuisanceParams& params) {
  const double rn = params.rho * static_cast<double>(s1.n);
  if (rn == 0.0) return 0.0;
  return rn / (rn + 1.0) * (s1.mean - params.mu);
}

double crb(const NuisanceParams& params, std::size_t n0, std::size_t n1) {
  const double rn = params.rho * static_cast<double>(n1);
  const double shrink = rn / (rn + 1.0);
  const double posterior_var = params.rho * params.v1 / (rn + 1.0);
  const double info = static_cast<double>(n0) / params.v0 +
                      static_cast<double>(n1) / params.v1 / (rn + 1.0);
  return posterior_var + shrink * shrink / info;
}

ConfidenceInterval confidence_interval(double delta_hat, double rmse2, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::invalid_params, "alpha must lie in (0, 1)");
  if (!(rmse2 >= 0.0)) fail(errc::invalid_params, "rmse2 must be nonnegative");
  if (rmse2 == 0.0) return ConfidenceInterval::make_empty();
  return ConfidenceInterval::centered(delta_hat, std::sqrt(rmse2 / alpha));
}

InferenceResult infer(const TwoGroupSample& sample, const InferenceConfig& config) {
  InferenceResult result;
  result.params = fit_nuisance(sample, config.fit);
  const GroupSummary s1 = summarize(sample.y1);
  result.delta_hat = effect_estimate(s1, result.params);
  const double rmse2 = crb(result.params, sample.n0(), sample.n1());
  result.rmse = std::sqrt(rmse2);
  result.interval = confidence_interval(result.delta_hat, rmse2, config.alpha);
  result.significant = !result.interval.empty() && !result.interval.contains(0.0);
  result.method = Method::proposed;
  return result;
}

}  // namespace twogroup
