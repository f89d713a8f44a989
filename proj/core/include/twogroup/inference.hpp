#pragma once

#include <cstddef>

#include "twogroup/interval.hpp"
#include "twogroup/mle.hpp"
#include "twogroup/sample.hpp"

namespace twogroup {

struct InferenceConfig {
  double alpha = 0.05;  // miscoverage budget of the interval
  FitConfig fit;
};

enum class Method { proposed, welch };

/// Outcome of the shrinkage pipeline on one sample.
struct InferenceResult {
  double delta_hat = 0.0;  // shrunken effect estimate
  double rmse = 0.0;       // root of the mean-squared-error bound at the fit
  ConfidenceInterval interval;
  bool significant = false;  // nonempty interval excluding zero
  NuisanceParams params;
  Method method = Method::proposed;
};

/// Conditional-mean effect estimate: the test-group deviation from the
/// overall mean, shrunk by rho*n1 / (rho*n1 + 1). Exactly zero when
/// rho is zero.
double effect_estimate(const GroupSummary& s1, const NuisanceParams& params);

/// Mean-squared-error lower bound r^2 of any unbiased-in-the-prior
/// effect estimator at the given nuisance parameters. Exactly zero when
/// rho is zero; the caller takes the square root for interval widths.
double crb(const NuisanceParams& params, std::size_t n0, std::size_t n1);

/// Interval of all effects closer to the estimate than
/// sqrt(rmse2 / alpha); Empty when rmse2 = 0, because the strict
/// inequality then admits no point.
ConfidenceInterval confidence_interval(double delta_hat, double rmse2, double alpha);

/// Full pipeline: fit the nuisance parameters, evaluate the estimate,
/// the error bound and the interval, and flag significance when the
/// nonempty interval excludes the zero effect.
InferenceResult infer(const TwoGroupSample& sample, const InferenceConfig& config = {});

}  // namespace twogroup
