#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "twogroup/mle.hpp"
#include "twogroup/random.hpp"

using namespace twogroup;

namespace {

TwoGroupSample random_sample(RandomStream& stream, std::size_t n0, std::size_t n1,
                             double gap = 0.6) {
  TwoGroupSample s;
  s.y0.resize(n0);
  s.y1.resize(n1);
  for (auto& v : s.y0) v = stream.next_normal(1.0, 0.8);
  for (auto& v : s.y1) v = stream.next_normal(1.0 + gap, 0.6);
  return s;
}

// The closed-form parameter estimates at a fixed mean.
NuisanceParams closed_form_at(const TwoGroupSample& sample, double mu) {
  const GroupSummary s0 = summarize(sample.y0);
  const GroupSummary s1 = summarize(sample.y1);
  const ConcentratedStats st = abc_stats(s1, mu);
  NuisanceParams p;
  p.mu = mu;
  p.v0 = v0_hat(s0, mu);
  p.rho = rho_hat(st, s1.n);
  p.v1 = v1_hat(st, p.rho, s1.n);
  p.tau = p.rho * p.v1;
  return p;
}

}  // namespace

TEST_CASE("abc_stats worked examples are exact") {
  const GroupSummary a = summarize(std::vector<double>{2.0, 4.0});
  const ConcentratedStats s1 = abc_stats(a, 1.0);
  CHECK(s1.alpha == 10.0);
  CHECK(s1.beta == 16.0);
  CHECK(s1.gamma == 4.0);

  const GroupSummary b = summarize(std::vector<double>{2.0, 0.0});
  const ConcentratedStats s2 = abc_stats(b, 1.0);
  CHECK(s2.alpha == 2.0);
  CHECK(s2.beta == 0.0);
  CHECK(s2.gamma == 4.0);

  const GroupSummary c = summarize(std::vector<double>{3.0, 3.0});
  const ConcentratedStats s3 = abc_stats(c, 1.0);
  CHECK(s3.alpha == 8.0);
  CHECK(s3.beta == 16.0);
  CHECK(s3.gamma == 0.0);
}

TEST_CASE("abc_stats agrees with direct residual sums") {
  RandomStream stream(31, 0);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> y(3 + rep % 7);
    for (auto& v : y) v = stream.next_normal(2.0, 1.5);
    const double mu = stream.next_normal(2.0, 1.0);
    const ConcentratedStats st = abc_stats(summarize(y), mu);

    double alpha = 0.0;
    double rsum = 0.0;
    for (double v : y) {
      alpha += (v - mu) * (v - mu);
      rsum += v - mu;
    }
    const double beta = rsum * rsum;
    CHECK(st.alpha == doctest::Approx(alpha).epsilon(1e-10));
    CHECK(st.beta == doctest::Approx(beta).epsilon(1e-10));
    CHECK(st.gamma ==
          doctest::Approx(alpha * static_cast<double>(y.size()) - beta).epsilon(1e-9));
    CHECK(st.gamma >= 0.0);
  }
}

TEST_CASE("gamma does not depend on the candidate mean") {
  RandomStream stream(32, 0);
  std::vector<double> y(6);
  for (auto& v : y) v = stream.next_normal(0.0, 1.0);
  const GroupSummary s = summarize(y);
  const double reference = abc_stats(s, 0.0).gamma;
  for (double mu : {-3.0, -0.5, 0.7, 2.0, 11.0}) {
    CHECK(abc_stats(s, mu).gamma == doctest::Approx(reference).epsilon(1e-9));
  }
}

TEST_CASE("v0_hat worked examples") {
  CHECK(v0_hat(summarize(std::vector<double>{0.0, 2.0}), 1.0) == 1.0);
  CHECK(v0_hat(summarize(std::vector<double>{1.0, 2.0, 3.0}), 2.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // The floor keeps the value positive when the mean fits perfectly.
  CHECK(v0_hat(summarize(std::vector<double>{1.0, 1.0}), 1.0) > 0.0);
}

TEST_CASE("rho_hat worked examples and degeneracy") {
  CHECK(rho_hat(ConcentratedStats{10.0, 16.0, 4.0}, 2) == 1.5);
  CHECK(rho_hat(ConcentratedStats{2.0, 0.0, 4.0}, 2) == 0.0);
  CHECK_THROWS_AS(rho_hat(ConcentratedStats{8.0, 16.0, 0.0}, 2), Error);
  try {
    rho_hat(ConcentratedStats{8.0, 16.0, 0.0}, 2);
  } catch (const Error& e) {
    CHECK(e.code() == errc::degenerate_group);
  }
}

TEST_CASE("v1_hat worked examples and limits") {
  const ConcentratedStats st{10.0, 16.0, 4.0};
  CHECK(v1_hat(st, 1.5, 2) == 2.0);
  // At rho = 0 the estimate is alpha / n1.
  CHECK(v1_hat(st, 0.0, 2) == 5.0);
  CHECK(v1_hat(ConcentratedStats{2.0, 0.0, 4.0}, 0.0, 2) == 1.0);
  // As rho grows the estimate approaches gamma / n1^2.
  CHECK(v1_hat(st, 1e12, 2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("concentrated_cost pinned values") {
  const TwoGroupSample symmetric{{0.0, 2.0}, {2.0, 0.0}};
  CHECK(concentrated_cost(symmetric, 1.0) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

  const TwoGroupSample shifted{{0.0, 2.0}, {2.0, 4.0}};
  CHECK(concentrated_cost(shifted, 1.0) ==
        doctest::Approx(2.0 * std::log(16.0) - std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("concentrated_cost is finite across a wide mean range") {
  RandomStream stream(33, 0);
  const TwoGroupSample sample = random_sample(stream, 8, 5);
  const ConcentratedCost cost(sample);
  for (int i = 0; i <= 200; ++i) {
    const double mu = -20.0 + 0.2 * static_cast<double>(i);
    CHECK(std::isfinite(cost(mu)));
  }
}

TEST_CASE("full_negloglik pinned value and parameter checks") {
  const TwoGroupSample sample{{0.0, 2.0}, {2.0, 0.0}};
  CHECK(full_negloglik(sample, {1.0, 1.0, 1.0, 0.0, 0.0}) ==
        doctest::Approx(4.0).epsilon(1e-14));

  CHECK_THROWS_AS(full_negloglik(sample, {1.0, 0.0, 1.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(full_negloglik(sample, {1.0, 1.0, -1.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(full_negloglik(sample, {1.0, 1.0, 1.0, 0.0, -0.5}), Error);
  CHECK_THROWS_AS(full_negloglik(sample, {NAN, 1.0, 1.0, 0.0, 0.0}), Error);
}

TEST_CASE("full_negloglik at tau = 0 is two independent gaussians") {
  RandomStream stream(34, 0);
  const TwoGroupSample sample = random_sample(stream, 7, 4);
  const double mu = 1.3;
  const double v0 = 0.7;
  const double v1 = 1.9;
  double expected = sample.n0() * std::log(v0) + sample.n1() * std::log(v1);
  for (double v : sample.y0) expected += (v - mu) * (v - mu) / v0;
  for (double v : sample.y1) expected += (v - mu) * (v - mu) / v1;
  CHECK(full_negloglik(sample, {mu, v0, v1, 0.0, 0.0}) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("full_negloglik matches the dense covariance oracle") {
  RandomStream stream(35, 0);
  for (int rep = 0; rep < 40; ++rep) {
    const TwoGroupSample sample = random_sample(stream, 2 + rep % 7, 2 + rep % 6);
    const double mu = stream.next_normal(1.0, 1.0);
    const double v0 = 0.2 + stream.next_uniform();
    const double v1 = 0.2 + stream.next_uniform();
    const double rho = rep % 5 == 0 ? 0.0 : std::exp(stream.next_normal(0.0, 2.0));
    NuisanceParams p{mu, v0, v1, rho, rho * v1};
    const double mine = full_negloglik(sample, p);
    const double dense = oracle::dense_negloglik(sample.y0, sample.y1, mu, v0, v1, rho);
    CHECK(mine == doctest::Approx(dense).epsilon(1e-9));
  }
}

TEST_CASE("stationarity identity holds wherever the SNR estimate is positive") {
  RandomStream stream(36, 0);
  int checked = 0;
  for (int rep = 0; rep < 200 && checked < 60; ++rep) {
    const TwoGroupSample sample = random_sample(stream, 5, 2 + rep % 6);
    const GroupSummary s1 = summarize(sample.y1);
    const double mu = stream.next_normal(1.0, 1.2);
    const ConcentratedStats st = abc_stats(s1, mu);
    const double rho = rho_hat(st, s1.n);
    if (rho <= 0.0) continue;
    ++checked;
    const double n1 = static_cast<double>(s1.n);
    const double lhs = st.gamma * (1.0 + rho * n1);
    const double rhs = (n1 - 1.0) * (st.alpha + rho * st.gamma);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
  CHECK(checked >= 30);
}

TEST_CASE("closed forms concentrate the full likelihood") {
  // Substituting the per-mean closed forms into the full cost must give
  // the concentrated cost plus the constant (n0 + n1) - n1*log(n1).
  RandomStream stream(37, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const TwoGroupSample sample = random_sample(stream, 2 + rep % 7, 2 + rep % 5);
    const double mu = stream.next_normal(1.0, 1.0);
    const NuisanceParams p = closed_form_at(sample, mu);
    const double n0 = static_cast<double>(sample.n0());
    const double n1 = static_cast<double>(sample.n1());
    const double offset = n0 + n1 - n1 * std::log(n1);
    const double full = full_negloglik(sample, p);
    const double concentrated = concentrated_cost(sample, mu);
    CHECK(full == doctest::Approx(concentrated + offset).epsilon(1e-9));
  }
}

TEST_CASE("closed forms are a local minimum of the full likelihood") {
  RandomStream stream(38, 0);
  for (int rep = 0; rep < 15; ++rep) {
    const TwoGroupSample sample = random_sample(stream, 6, 5);
    const double mu = stream.next_normal(1.2, 0.5);
    const NuisanceParams p = closed_form_at(sample, mu);
    const double base = full_negloglik(sample, p);
    for (double factor : {0.97, 1.03}) {
      NuisanceParams q = p;
      q.v0 = p.v0 * factor;
      CHECK(full_negloglik(sample, q) >= base - 1e-10 * std::abs(base));
      q = p;
      q.v1 = p.v1 * factor;
      q.tau = p.rho * q.v1;
      CHECK(full_negloglik(sample, q) >= base - 1e-10 * std::abs(base));
      if (p.rho > 0.0) {
        q = p;
        q.rho = p.rho * factor;
        q.tau = q.rho * p.v1;
        CHECK(full_negloglik(sample, q) >= base - 1e-10 * std::abs(base));
      }
    }
  }
}

TEST_CASE("concentrated cost plus constant matches the dense numeric minimum") {
  // Small version of the acceptance check: the minimum of the dense
  // joint cost over (v0, v1, rho), found by nested numeric search with
  // no closed forms, equals the concentrated cost up to the constant.
  RandomStream stream(39, 0);
  for (int rep = 0; rep < 6; ++rep) {
    const TwoGroupSample sample = random_sample(stream, 2 + rep, 2 + (rep * 2) % 5);
    const double mu = stream.next_normal(1.0, 0.8);
    const double n0 = static_cast<double>(sample.n0());
    const double n1 = static_cast<double>(sample.n1());
    const double offset = n0 + n1 - n1 * std::log(n1);
    const double expected = oracle::dense_min_negloglik(sample.y0, sample.y1, mu);
    const double got = concentrated_cost(sample, mu) + offset;
    CHECK(got == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("fit_nuisance is deterministic and internally consistent") {
  RandomStream stream(40, 0);
  const TwoGroupSample sample = random_sample(stream, 12, 8);
  const NuisanceParams a = fit_nuisance(sample);
  const NuisanceParams b = fit_nuisance(sample);
  CHECK(a.mu == b.mu);
  CHECK(a.v0 == b.v0);
  CHECK(a.v1 == b.v1);
  CHECK(a.rho == b.rho);
  CHECK(a.tau == b.tau);
  CHECK(a.tau == a.rho * a.v1);

  // The fitted parameters must reproduce the closed forms at mu-hat.
  const NuisanceParams c = closed_form_at(sample, a.mu);
  CHECK(a.v0 == c.v0);
  CHECK(a.v1 == c.v1);
  CHECK(a.rho == c.rho);
}

TEST_CASE("fitted mean beats random candidates") {
  RandomStream stream(41, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const TwoGroupSample sample = random_sample(stream, 9, 6);
    const ConcentratedCost cost(sample);
    const NuisanceParams fit = fit_nuisance(sample);
    const double best = cost(fit.mu);
    for (int k = 0; k < 64; ++k) {
      const double mu = stream.next_normal(1.3, 1.5);
      CHECK(best <= cost(mu) + 1e-9 * (1.0 + std::abs(best)));
    }
  }
}

TEST_CASE("fit recovers the common mean of null data") {
  // Both groups share mean 1; the average fitted mean over replications
  // must land close to it.
  double total = 0.0;
  const int reps = 300;
  for (int r = 0; r < reps; ++r) {
    RandomStream stream(505, static_cast<std::uint64_t>(r));
    TwoGroupSample sample;
    sample.y0.resize(40);
    sample.y1.resize(20);
    for (auto& v : sample.y0) v = stream.next_normal(1.0, 0.3);
    for (auto& v : sample.y1) v = stream.next_normal(1.0, 0.3);
    total += fit_nuisance(sample).mu;
  }
  CHECK(std::abs(total / reps - 1.0) < 0.02);
}

TEST_CASE("fit_nuisance translation and scale equivariance") {
  RandomStream stream(42, 0);
  const TwoGroupSample sample = random_sample(stream, 10, 7);
  const NuisanceParams base = fit_nuisance(sample);

  for (double c : {7.25, -3.5, 1e4}) {
    TwoGroupSample shifted = sample;
    for (auto& v : shifted.y0) v += c;
    for (auto& v : shifted.y1) v += c;
    const NuisanceParams p = fit_nuisance(shifted);
    const double tol = 1e-8 * (1.0 + std::abs(c));
    CHECK(std::abs(p.mu - (base.mu + c)) <= tol);
    CHECK(std::abs(p.v0 - base.v0) <= tol);
    CHECK(std::abs(p.v1 - base.v1) <= tol);
    CHECK(std::abs(p.rho - base.rho) <= tol * (1.0 + base.rho));
  }

  for (double s : {2.0, 0.125, 37.5}) {
    TwoGroupSample scaled = sample;
    for (auto& v : scaled.y0) v *= s;
    for (auto& v : scaled.y1) v *= s;
    const NuisanceParams p = fit_nuisance(scaled);
    CHECK(p.mu == doctest::Approx(base.mu * s).epsilon(1e-8));
    CHECK(p.v0 == doctest::Approx(base.v0 * s * s).epsilon(1e-8));
    CHECK(p.v1 == doctest::Approx(base.v1 * s * s).epsilon(1e-8));
    CHECK(p.rho == doctest::Approx(base.rho).epsilon(1e-8));
  }
}

TEST_CASE("fit_nuisance validates sample and config") {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return errc::invalid_sample;
  };
  CHECK(code_of([] { fit_nuisance({{1.0}, {2.0, 3.0}}); }) == errc::too_few_samples);
  CHECK(code_of([] { fit_nuisance({{1.0, 1.0}, {2.0, 3.0}}); }) == errc::degenerate_group);

  const TwoGroupSample ok{{0.0, 1.0}, {2.0, 3.0}};
  FitConfig bad;
  bad.grid_points = 2;
  CHECK(code_of([&] { fit_nuisance(ok, bad); }) == errc::invalid_params);
  bad = FitConfig{};
  bad.refine_rel_tol = 0.0;
  CHECK(code_of([&] { fit_nuisance(ok, bad); }) == errc::invalid_params);
  bad = FitConfig{};
  bad.variance_floor = -1.0;
  CHECK(code_of([&] { fit_nuisance(ok, bad); }) == errc::invalid_params);
}
