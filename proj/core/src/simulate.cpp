#include "twogroup/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "twogroup/parallel.hpp"

namespace twogroup {
namespace {

double rate(std::size_t count, std::size_t total) noexcept {
  return static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

void validate(const SimScenario& s) {
  if (s.replications < 1) fail(errc::invalid_scenario, "replications must be at least 1");
  if (!(s.v0 > 0.0) || !(s.v1 > 0.0)) fail(errc::invalid_scenario, "variances must be positive");
  if (s.n0 < 2 || s.n1 < 2) {
    fail(errc::invalid_scenario, "each group needs at least 2 observations");
  }
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) fail(errc::invalid_scenario, "alpha must lie in (0, 1)");
  if (!std::isfinite(s.mu) || !std::isfinite(s.delta_true) || !std::isfinite(s.bias)) {
    fail(errc::invalid_scenario, "mu, delta_true and bias must be finite");
  }
}

double bias_unit(const SimScenario& s) {
  return std::sqrt(s.v0 / static_cast<double>(s.n0));
}

TwoGroupSample draw_sample(const SimScenario& scenario, RandomStream& stream) {
  TwoGroupSample sample;
  sample.y0.resize(scenario.n0);
  sample.y1.resize(scenario.n1);
  const double sd0 = std::sqrt(scenario.v0);
  const double sd1 = std::sqrt(scenario.v1);
  const double mean1 = scenario.mu + scenario.delta_true + scenario.bias;
  for (auto& v : sample.y0) v = stream.next_normal(scenario.mu, sd0);
  for (auto& v : sample.y1) v = stream.next_normal(mean1, sd1);
  return sample;
}

double ReplicationOutcome::significant_rate_proposed() const noexcept {
  return rate(significant_proposed, replications);
}

double ReplicationOutcome::significant_rate_welch() const noexcept {
  return rate(significant_welch, replications);
}

double ReplicationOutcome::empty_rate_proposed() const noexcept {
  return rate(empty_proposed, replications);
}

double ReplicationOutcome::zero_rate_proposed() const noexcept {
  return rate(zero_proposed, replications);
}

ReplicationOutcome run_replications(const SimScenario& scenario, const FitConfig& fit,
                                    int threads) {
  validate(scenario);
  const std::size_t reps = scenario.replications;

  ReplicationOutcome out;
  out.replications = reps;
  out.delta_proposed.resize(reps);
  out.delta_welch.resize(reps);
  std::vector<std::uint8_t> sig_proposed(reps);
  std::vector<std::uint8_t> sig_welch(reps);
  std::vector<std::uint8_t> empty_proposed(reps);

  InferenceConfig config;
  config.alpha = scenario.alpha;
  config.fit = fit;

  parallel_for(reps, threads, [&](std::size_t r) {
    RandomStream stream(scenario.seed, r);
    const TwoGroupSample sample = draw_sample(scenario, stream);
    const InferenceResult proposed = infer(sample, config);
    const WelchResult welch = welch_infer(sample, scenario.alpha);
    out.delta_proposed[r] = proposed.delta_hat;
    out.delta_welch[r] = welch.delta_hat;
    sig_proposed[r] = proposed.significant ? 1 : 0;
    sig_welch[r] = welch.significant ? 1 : 0;
    empty_proposed[r] = proposed.interval.empty() ? 1 : 0;
  });

  // Integer aggregation in index order: the totals cannot depend on
  // which thread finished first.
  for (std::size_t r = 0; r < reps; ++r) {
    out.significant_proposed += sig_proposed[r];
    out.significant_welch += sig_welch[r];
    out.empty_proposed += empty_proposed[r];
    if (out.delta_proposed[r] == 0.0) ++out.zero_proposed;
  }
  return out;
}

namespace {

ErrorRateRow null_effect_row(const SimScenario& scenario, double sweep_value,
                             const FitConfig& fit, int threads) {
  const ReplicationOutcome out = run_replications(scenario, fit, threads);
  ErrorRateRow row;
  row.sweep_value = sweep_value;
  row.fp_rate_proposed = out.significant_rate_proposed();
  row.fp_rate_welch = out.significant_rate_welch();
  row.empty_rate_proposed = out.empty_rate_proposed();
  return row;
}

}  // namespace

std::vector<ErrorRateRow> sweep_bias(const SimScenario& base, std::span<const double> bias_units,
                                     const FitConfig& fit, int threads) {
  if (base.delta_true != 0.0) {
    fail(errc::invalid_scenario, "bias sweeps measure false positives, delta_true must be 0");
  }
  for (double u : bias_units) {
    if (!std::isfinite(u)) fail(errc::invalid_scenario, "bias grid values must be finite");
  }
  const double unit = bias_unit(base);
  std::vector<ErrorRateRow> rows;
  rows.reserve(bias_units.size());
  for (double u : bias_units) {
    SimScenario scenario = base;
    scenario.bias = u * unit;
    rows.push_back(null_effect_row(scenario, u, fit, threads));
  }
  return rows;
}

std::vector<ErrorRateRow> sweep_n0(const SimScenario& base, std::span<const std::size_t> n0_grid,
                                   const FitConfig& fit, int threads) {
  std::vector<ErrorRateRow> rows;
  rows.reserve(n0_grid.size());
  for (std::size_t n0 : n0_grid) {
    if (n0 % 2 != 0 || n0 < 4) {
      fail(errc::invalid_scenario, "n0 grid values must be even (n1 = n0/2) and at least 4");
    }
    SimScenario scenario = base;
    scenario.n0 = n0;
    scenario.n1 = n0 / 2;
    scenario.bias = -std::sqrt(base.v0 / static_cast<double>(n0));
    scenario.delta_true = 0.0;
    ErrorRateRow row = null_effect_row(scenario, static_cast<double>(n0), fit, threads);

    scenario.delta_true = std::sqrt(base.v0);
    const ReplicationOutcome with_effect = run_replications(scenario, fit, threads);
    row.fn_rate_proposed = 1.0 - with_effect.significant_rate_proposed();
    row.fn_rate_welch = 1.0 - with_effect.significant_rate_welch();
    rows.push_back(row);
  }
  return rows;
}

double Histogram::bin_width() const noexcept {
  return (hi - lo) / static_cast<double>(counts.size());
}

std::size_t Histogram::bin_of(double x) const noexcept {
  if (x <= lo) return 0;
  const std::size_t last = counts.size() - 1;
  if (x >= hi) return last;
  const auto idx = static_cast<std::size_t>((x - lo) / bin_width());
  return std::min(idx, last);
}

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) fail(errc::invalid_params, "histogram needs bins >= 1 and hi > lo");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  for (double v : values) ++h.counts[h.bin_of(v)];
  return h;
}

}  // namespace twogroup
