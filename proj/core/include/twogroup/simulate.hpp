#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "twogroup/inference.hpp"
#include "twogroup/random.hpp"
#include "twogroup/welch.hpp"

namespace twogroup {

/// Generative setup for one synthetic experiment: two i.i.d. normal
/// groups around a common mean, a fixed true effect on the test group,
/// plus an additive sampling bias on every test-group observation.
struct SimScenario {
  std::size_t n0 = 40;
  std::size_t n1 = 20;
  double mu = 1.0;
  double v0 = 0.09;
  double v1 = 0.0225;
  double delta_true = 0.0;
  double bias = 0.0;  // additive shift applied to every test-group draw
  double alpha = 0.05;
  std::size_t replications = 5000;
  std::uint64_t seed = 0;
};

/// Throws InvalidScenario on nonpositive variances, fewer than two
/// observations per group, fewer than one replication, or non-finite
/// location settings.
void validate(const SimScenario& scenario);

/// Standard deviation of the reference-group sample mean, the natural
/// unit for bias sweeps.
double bias_unit(const SimScenario& scenario);

/// One synthetic sample: n0 reference draws around mu, then n1 test
/// draws around mu + delta_true + bias, consumed from the stream in
/// exactly that order.
TwoGroupSample draw_sample(const SimScenario& scenario, RandomStream& stream);

/// Aggregate over all replications of one scenario. Estimates are kept
/// in replication order, so the aggregate is independent of thread
/// scheduling.
struct ReplicationOutcome {
  std::size_t replications = 0;
  std::size_t significant_proposed = 0;
  std::size_t significant_welch = 0;
  std::size_t empty_proposed = 0;  // replications with an empty interval
  std::size_t zero_proposed = 0;   // estimates exactly equal to zero
  std::vector<double> delta_proposed;
  std::vector<double> delta_welch;

  double significant_rate_proposed() const noexcept;
  double significant_rate_welch() const noexcept;
  double empty_rate_proposed() const noexcept;
  double zero_rate_proposed() const noexcept;
};

/// Runs every replication on its own substream (seed, replication
/// index) and applies both methods to the same sample.
ReplicationOutcome run_replications(const SimScenario& scenario, const FitConfig& fit = {},
                                    int threads = 0);

/// One row of an error-rate sweep. False-negative rates are present
/// only for sweeps that also run a nonzero true effect.
struct ErrorRateRow {
  double sweep_value = 0.0;
  double fp_rate_proposed = 0.0;
  double fp_rate_welch = 0.0;
  std::optional<double> fn_rate_proposed;
  std::optional<double> fn_rate_welch;
  double empty_rate_proposed = 0.0;
};

/// False-positive rates along a bias grid given in units of
/// sqrt(v0/n0). The base scenario must have delta_true = 0.
std::vector<ErrorRateRow> sweep_bias(const SimScenario& base, std::span<const double> bias_units,
                                     const FitConfig& fit = {}, int threads = 0);

/// Error rates along a sample-size grid. Every point uses n1 = n0/2 and
/// bias -sqrt(v0/n0), and runs twice: once with zero effect for the
/// false-positive rate and once with effect sqrt(v0) for the
/// false-negative rate. Grid values must be even and at least 4.
std::vector<ErrorRateRow> sweep_n0(const SimScenario& base, std::span<const std::size_t> n0_grid,
                                   const FitConfig& fit = {}, int threads = 0);

/// Equal-width histogram over [lo, hi]; values outside the range are
/// counted in the nearest end bin, so no observation is lost.
struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  double bin_width() const noexcept;
  std::size_t bin_of(double x) const noexcept;
};

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lo, double hi);

}  // namespace twogroup
