#include "twogroup/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace twogroup {
namespace {

void check_config(const FitConfig& config) {
  if (config.grid_points < 3) fail(errc::invalid_params, "grid_points must be at least 3");
  if (!(config.bracket_expansion > 0.0) || !(config.refine_rel_tol > 0.0) ||
      !(config.variance_floor > 0.0)) {
    fail(errc::invalid_params, "FitConfig expansion, tolerance and floor must be positive");
  }
}

double group_sd(const GroupSummary& s) {
  const double centered = s.sumsq - static_cast<double>(s.n) * s.mean * s.mean;
  return std::sqrt(std::max(0.0, centered) / static_cast<double>(s.n - 1));
}

// Golden-section minimization of f over [lo, hi] down to bracket width
// tol. f must be unimodal on the bracket for an exact answer; on the
// narrow refinement brackets used here that always holds.
template <typename F>
double golden_section_min(F&& f, double lo, double hi, double tol) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ConcentratedStats abc_stats(const GroupSummary& s1, double mu) {
  const double n = static_cast<double>(s1.n);
  ConcentratedStats st;
  st.alpha = std::max(0.0, s1.sumsq - mu * n * (2.0 * s1.mean - mu));
  const double centered_sum = n * (s1.mean - mu);
  st.beta = centered_sum * centered_sum;
  st.gamma = std::max(0.0, st.alpha * n - st.beta);
  return st;
}

double v0_hat(const GroupSummary& s0, double mu, double variance_floor) {
  const double n = static_cast<double>(s0.n);
  const double raw = s0.sumsq / n - mu * (2.0 * s0.mean - mu);
  const double floor = variance_floor * (1.0 + s0.sumsq / n);
  return std::max(raw, floor);
}

double rho_hat(const ConcentratedStats& stats, std::size_t n1, double variance_floor) {
  const double excess = stats.beta - stats.alpha;
  if (excess < 0.0) return 0.0;
  const double divisor_floor = variance_floor * static_cast<double>(n1) * (1.0 + stats.alpha);
  if (stats.gamma <= divisor_floor) {
    fail(errc::degenerate_group,
         "gamma is numerically zero (constant test group), the SNR estimate is undefined");
  }
  return excess / stats.gamma;
}

double v1_hat(const ConcentratedStats& stats, double rho, std::size_t n1,
              double variance_floor) {
  const double n = static_cast<double>(n1);
  const double raw = (stats.alpha + rho * stats.gamma) / (n * (1.0 + rho * n));
  const double floor = variance_floor * (1.0 + stats.alpha / n);
  return std::max(raw, floor);
}

ConcentratedCost::ConcentratedCost(const TwoGroupSample& sample, const FitConfig& config)
    : s0_(summarize(sample.y0)), s1_(summarize(sample.y1)), config_(config) {
  check_config(config_);
}

double ConcentratedCost::operator()(double mu) const {
  const double n0 = static_cast<double>(s0_.n);
  const double n1 = static_cast<double>(s1_.n);
  const double v0 = v0_hat(s0_, mu, config_.variance_floor);
  const ConcentratedStats st = abc_stats(s1_, mu);
  const double rho = rho_hat(st, s1_.n, config_.variance_floor);
  const double scaled = std::max(st.alpha + rho * st.gamma,
                                 config_.variance_floor * (1.0 + s1_.sumsq));
  return n0 * std::log(v0) + n1 * std::log(scaled) - (n1 - 1.0) * std::log1p(rho * n1);
}

double concentrated_cost(const TwoGroupSample& sample, double mu, const FitConfig& config) {
  return ConcentratedCost(sample, config)(mu);
}

double full_negloglik(const TwoGroupSample& sample, const NuisanceParams& params) {
  if (!std::isfinite(params.mu) || !std::isfinite(params.v0) || !std::isfinite(params.v1) ||
      !std::isfinite(params.tau) || params.v0 <= 0.0 || params.v1 <= 0.0 || params.tau < 0.0) {
    fail(errc::invalid_params, "full_negloglik requires finite mu, v0 > 0, v1 > 0 and tau >= 0");
  }
  const double n0 = static_cast<double>(sample.n0());
  const double n1 = static_cast<double>(sample.n1());

  double ss0 = 0.0;
  for (double v : sample.y0) {
    const double d = v - params.mu;
    ss0 += d * d;
  }
  double ss1 = 0.0;
  double rsum = 0.0;
  for (double v : sample.y1) {
    const double d = v - params.mu;
    ss1 += d * d;
    rsum += d;
  }

  const double rho = params.tau / params.v1;
  const double quad = (ss1 - rho * rsum * rsum / (1.0 + rho * n1)) / params.v1;
  return n0 * std::log(params.v0) + ss0 / params.v0 + n1 * std::log(params.v1) +
         std::log1p(rho * n1) + quad;
}

NuisanceParams fit_nuisance(const TwoGroupSample& sample, const FitConfig& config) {
  validate(sample);
  check_config(config);
  const ConcentratedCost cost(sample, config);
  const GroupSummary& s0 = cost.s0();
  const GroupSummary& s1 = cost.s1();

  // Bracket: the group means plus a generous multiple of the combined
  // spread. Outside the data range the cost grows like a log of the
  // squared distance, so the minimizer cannot escape the bracket.
  const double spread = group_sd(s0) + group_sd(s1) + std::abs(s1.mean - s0.mean);
  const double lower = std::min(s0.mean, s1.mean) - config.bracket_expansion * spread;
  const double upper = std::max(s0.mean, s1.mean) + config.bracket_expansion * spread;

  const int grid = config.grid_points;
  const double width = upper - lower;
  auto grid_mu = [&](int i) {
    return lower + width * static_cast<double>(i) / static_cast<double>(grid - 1);
  };

  std::vector<double> costs(static_cast<std::size_t>(grid));
  double min_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    costs[static_cast<std::size_t>(i)] = cost(grid_mu(i));
    min_cost = std::min(min_cost, costs[static_cast<std::size_t>(i)]);
  }

  // Ties within rounding noise resolve to the smallest mean.
  const double tie_slack = 1e-12 * std::max(1.0, std::abs(min_cost));
  int pick = grid - 1;
  for (int i = 0; i < grid; ++i) {
    if (costs[static_cast<std::size_t>(i)] <= min_cost + tie_slack) {
      pick = i;
      break;
    }
  }

  const double refine_lo = grid_mu(std::max(pick - 1, 0));
  const double refine_hi = grid_mu(std::min(pick + 1, grid - 1));
  const double tol =
      std::max(config.refine_rel_tol * width,
               4.0 * std::numeric_limits<double>::epsilon() *
                   std::max(std::abs(refine_lo), std::abs(refine_hi)));

  double mu_best = grid_mu(pick);
  if (refine_hi > refine_lo) {
    const double candidate = golden_section_min(cost, refine_lo, refine_hi, tol);
    if (cost(candidate) <= costs[static_cast<std::size_t>(pick)]) mu_best = candidate;
  }

  // Half of minus the cost derivative. The closed forms are stationary
  // in (v0, v1, rho), so only the explicit mu dependence survives:
  //   -f'(mu)/2 = w0 (mean0 - mu) + w1 (mean1 - mu)
  // with w0 = n0 / v0_hat and w1 = n1 / ((1 + rho_hat n1) v1_hat).
  auto stationarity = [&](double mu) {
    const double v0 = v0_hat(s0, mu, config.variance_floor);
    const ConcentratedStats st = abc_stats(s1, mu);
    const double rho = rho_hat(st, s1.n, config.variance_floor);
    const double v1 = v1_hat(st, rho, s1.n, config.variance_floor);
    const double n0d = static_cast<double>(s0.n);
    const double n1d = static_cast<double>(s1.n);
    const double w0 = n0d / v0;
    const double w1 = n1d / ((1.0 + rho * n1d) * v1);
    return w0 * (s0.mean - mu) + w1 * (s1.mean - mu);
  };

  // Bisection polish on the stationarity residual. Cost comparisons
  // cannot resolve the minimizer below ~sqrt(machine eps) because the
  // cost is flat there, but the residual crosses zero with nonvanishing
  // slope, so its root pins mu to machine precision. The residual is
  // positive left of a minimum and negative right of it.
  {
    const double h_best = stationarity(mu_best);
    double a = mu_best;
    double b = mu_best;
    if (h_best > 0.0 && refine_hi > mu_best && stationarity(refine_hi) < 0.0) {
      b = refine_hi;
    } else if (h_best < 0.0 && refine_lo < mu_best && stationarity(refine_lo) > 0.0) {
      a = refine_lo;
    }
    if (b > a) {
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (a + b);
        if (!(mid > a && mid < b)) break;
        if (stationarity(mid) > 0.0) {
          a = mid;
        } else {
          b = mid;
        }
      }
      const double polished = 0.5 * (a + b);
      const double reference = cost(mu_best);
      if (cost(polished) <= reference + 1e-9 * (1.0 + std::abs(reference))) mu_best = polished;
    }
  }

  const ConcentratedStats st = abc_stats(s1, mu_best);
  const double rho = rho_hat(st, s1.n, config.variance_floor);
  NuisanceParams p;
  p.mu = mu_best;
  p.v0 = v0_hat(s0, mu_best, config.variance_floor);
  p.v1 = v1_hat(st, rho, s1.n, config.variance_floor);
  p.rho = rho;
  p.tau = rho * p.v1;
  return p;
}

}  // namespace twogroup
