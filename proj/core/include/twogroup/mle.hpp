#pragma once

#include <cstddef>

#include "twogroup/sample.hpp"

namespace twogroup {

/// Controls the one-dimensional search for the overall mean.
struct FitConfig {
  int grid_points = 4097;          // dense scan of the bracket
  double bracket_expansion = 3.0;  // bracket reaches this many spread units past the group means
  double refine_rel_tol = 1e-12;   // golden-section width target, relative to the bracket width
  double variance_floor = 1e-12;   // relative floor that keeps logarithms finite
};

/// Nuisance parameters of the two-group model: overall mean, per-group
/// noise variances, and the effect-prior strength expressed both as the
/// signal-to-noise ratio rho = tau / v1 and the prior variance tau.
struct NuisanceParams {
  double mu = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  double rho = 0.0;
  double tau = 0.0;  // always rho * v1
};

/// The mean-dependent scalars the concentrated likelihood is built
/// from, for a fixed candidate mean mu:
///   alpha = ||y1 - mu 1||^2
///   beta  = (1'(y1 - mu 1))^2
///   gamma = alpha * n1 - beta
/// gamma >= 0 by Cauchy-Schwarz and does not depend on mu; negative
/// rounding residue is clamped to zero.
struct ConcentratedStats {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

ConcentratedStats abc_stats(const GroupSummary& s1, double mu);

/// ML noise variance of the reference group at a fixed mean, floored at
/// variance_floor * (1 + sumsq / n0).
double v0_hat(const GroupSummary& s0, double mu, double variance_floor = 1e-12);

/// ML signal-to-noise ratio at a fixed mean: (beta - alpha) / gamma,
/// clamped to zero when beta < alpha. Throws DegenerateGroup when the
/// divisor gamma is numerically zero (a constant test group).
double rho_hat(const ConcentratedStats& stats, std::size_t n1, double variance_floor = 1e-12);

/// ML test-group noise variance at fixed mean and SNR:
/// (alpha + rho*gamma) / (n1 * (1 + rho*n1)), floored like v0_hat.
double v1_hat(const ConcentratedStats& stats, double rho, std::size_t n1,
              double variance_floor = 1e-12);

/// Evaluator of the concentrated negative log-likelihood f(mu). Built
/// once per sample over cached sufficient statistics, so a grid sweep
/// costs O(1) per point rather than O(n).
class ConcentratedCost {
 public:
  explicit ConcentratedCost(const TwoGroupSample& sample, const FitConfig& config = {});

  double operator()(double mu) const;

  const GroupSummary& s0() const noexcept { return s0_; }
  const GroupSummary& s1() const noexcept { return s1_; }

 private:
  GroupSummary s0_;
  GroupSummary s1_;
  FitConfig config_;
};

/// f(mu) for a single mean value; prefer ConcentratedCost for sweeps.
double concentrated_cost(const TwoGroupSample& sample, double mu, const FitConfig& config = {});

/// Marginal negative log-likelihood of the sample (up to the additive
/// 2*pi constant) under explicit nuisance parameters. The test-group
/// covariance enters through its rank-one determinant and inverse
/// identities, so no n-by-n matrix is ever formed. Throws InvalidParams
/// unless v0 > 0, v1 > 0, tau >= 0 and mu is finite.
double full_negloglik(const TwoGroupSample& sample, const NuisanceParams& params);

/// Maximum-likelihood fit of the nuisance parameters: a dense grid scan
/// of f(mu) over a data-driven bracket, golden-section refinement
/// around the best grid point, then the closed-form variance and SNR
/// estimates at the winning mean. Deterministic for identical inputs
/// and config.
NuisanceParams fit_nuisance(const TwoGroupSample& sample, const FitConfig& config = {});

}  // namespace twogroup
