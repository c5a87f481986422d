// Copyright 2026 The mepgof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "mepgof/diffusion_gof.hpp"
#include "mepgof/limitlaws.hpp"
#include "mepgof/random.hpp"
#include "mepgof/sde.hpp"
#include "mepgof/ts_gof.hpp"

namespace mepgof {
namespace {

void BM_PhiloxWords(benchmark::State& state) {
  PhiloxStream gen({kDefaultRootSeed, 0});
  for (auto _ : state) benchmark::DoNotOptimize(gen());
}
BENCHMARK(BM_PhiloxWords);

void BM_StandardNormal(benchmark::State& state) {
  PhiloxStream gen({kDefaultRootSeed, 0});
  for (auto _ : state) benchmark::DoNotOptimize(standard_normal(gen));
}
BENCHMARK(BM_StandardNormal);

void BM_NormalQuantileRefined(benchmark::State& state) {
  double p = 0.1234;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_quantile(p));
    p = p < 0.9 ? p + 1e-6 : 0.1234;
  }
}
BENCHMARK(BM_NormalQuantileRefined);

void BM_LimitPath(benchmark::State& state) {
  const auto K = static_cast<std::size_t>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    PhiloxStream gen({kDefaultRootSeed, stream++});
    benchmark::DoNotOptimize(ad_functional(simulate_bm(K, gen)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(K));
}
BENCHMARK(BM_LimitPath)->Arg(kDefaultCvmGrid)->Arg(kDefaultAdGrid);

void BM_EulerOu(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DiffusionModel model = ou_model(1.0, 1.0);
  const SamplingScheme scheme = make_scheme(n, 2.0 / 3.0, 1.0);
  std::uint64_t stream = 0;
  for (auto _ : state) {
    PhiloxStream gen({kDefaultRootSeed, stream++});
    benchmark::DoNotOptimize(euler_maruyama(model, scheme, 0.0, gen).states.back());
  }
}
BENCHMARK(BM_EulerOu)->Arg(1000)->Arg(10000);

void BM_CvmStatistic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DiffusionModel model = ou_model(1.0, 1.0);
  const DiffusionHypothesis hyp = make_diffusion_hypothesis(model);
  PhiloxStream gen({kDefaultRootSeed, 0});
  const auto sample = euler_maruyama(model, make_scheme(n, 2.0 / 3.0, 1.0), 0.0, gen);
  for (auto _ : state) benchmark::DoNotOptimize(cvm_statistic(sample, hyp));
}
BENCHMARK(BM_CvmStatistic)->Arg(1000)->Arg(10000);

void BM_AdStatistic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TSHypothesis hyp = ar1_normal_hypothesis(0.5);
  PhiloxStream gen({kDefaultRootSeed, 0});
  const auto series = simulate_ts(ar1_model(0.5), n, 1000, gen);
  for (auto _ : state) benchmark::DoNotOptimize(ad_statistic(series, hyp));
}
BENCHMARK(BM_AdStatistic)->Arg(1000)->Arg(10000);

void BM_InvariantLaw(benchmark::State& state) {
  const DiffusionModel model = tanh_drift_model(1.0, 0.5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(invariant_law(model).cdf(0.0));
}
BENCHMARK(BM_InvariantLaw);

}  // namespace
}  // namespace mepgof

BENCHMARK_MAIN();
