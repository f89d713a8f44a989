#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>

#include "twogroup/twogroup.hpp"

namespace {

twogroup::TwoGroupSample make_sample(std::size_t n0, std::size_t n1, std::uint64_t seed) {
  twogroup::RandomStream stream(seed, 0);
  twogroup::TwoGroupSample s;
  s.y0.resize(n0);
  s.y1.resize(n1);
  for (auto& v : s.y0) v = stream.next_normal(1.0, 0.3);
  for (auto& v : s.y1) v = stream.next_normal(1.1, 0.15);
  return s;
}

void BM_FitNuisance(benchmark::State& state) {
  const auto n0 = static_cast<std::size_t>(state.range(0));
  const twogroup::TwoGroupSample sample = make_sample(n0, n0 / 2, 1);
  for (auto _ : state) {
    twogroup::NuisanceParams p = twogroup::fit_nuisance(sample);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_FitNuisance)->Arg(20)->Arg(40)->Arg(160)->Arg(640)->Arg(2560);

void BM_Infer(benchmark::State& state) {
  const twogroup::TwoGroupSample sample = make_sample(40, 20, 2);
  for (auto _ : state) {
    twogroup::InferenceResult r = twogroup::infer(sample);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Infer);

void BM_WelchInfer(benchmark::State& state) {
  const twogroup::TwoGroupSample sample = make_sample(40, 20, 3);
  for (auto _ : state) {
    twogroup::WelchResult r = twogroup::welch_infer(sample, 0.05);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_WelchInfer);

void BM_TQuantile(benchmark::State& state) {
  const double dof = static_cast<double>(state.range(0));
  double p = 0.51;
  for (auto _ : state) {
    benchmark::DoNotOptimize(twogroup::t_quantile(p, dof));
    p += 0.01;
    if (p >= 0.995) p = 0.51;
  }
}
BENCHMARK(BM_TQuantile)->Arg(1)->Arg(10)->Arg(100);

void BM_RunReplications(benchmark::State& state) {
  twogroup::SimScenario scenario;
  scenario.replications = 200;
  scenario.seed = 5;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    twogroup::ReplicationOutcome out = twogroup::run_replications(scenario, {}, threads);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 200);
}
BENCHMARK(BM_RunReplications)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_BatchAnalyze(benchmark::State& state) {
  const auto markers = static_cast<std::size_t>(state.range(0));
  twogroup::MarkerDataset dataset;
  dataset.n0 = 50;
  dataset.n1 = 52;
  twogroup::RandomStream stream(6, 0);
  for (std::size_t i = 0; i < markers; ++i) {
    twogroup::Marker m;
    m.id = "m" + std::to_string(i);
    m.sample.y0.resize(dataset.n0);
    m.sample.y1.resize(dataset.n1);
    for (auto& v : m.sample.y0) v = stream.next_normal();
    for (auto& v : m.sample.y1) v = stream.next_normal();
    dataset.markers.push_back(std::move(m));
  }
  for (auto _ : state) {
    twogroup::BatchResult r = twogroup::analyze_all(dataset, 0.05, {}, 0);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(markers));
}
BENCHMARK(BM_BatchAnalyze)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
