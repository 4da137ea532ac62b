// Copyright 2026 The mscorisk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include "benchmark/benchmark.h"

#include "mscorisk/attribution.hpp"
#include "mscorisk/co_risk.hpp"
#include "mscorisk/ms_model.hpp"
#include "mscorisk/predictive.hpp"
#include "mscorisk/simulate.hpp"
#include "mscorisk/student_t.hpp"

namespace mscorisk {
namespace {

MsTModel SectorModel(std::size_t p, std::size_t L) {
  MsTModel m;
  const auto k = static_cast<Eigen::Index>(p);
  for (std::size_t l = 0; l < L; ++l) {
    const double sd = 0.02 * (1.0 + static_cast<double>(l));
    const double rho = 0.3 + 0.1 * static_cast<double>(l);
    MvtParams r;
    r.location = Eigen::VectorXd::Constant(k, 0.002 - 0.002 * static_cast<double>(l));
    r.scale = Eigen::MatrixXd::Constant(k, k, rho * sd * sd);
    r.scale.diagonal().setConstant(sd * sd);
    r.dof = 4.0 + 3.0 * static_cast<double>(l);
    m.regimes.push_back(r);
  }
  const auto n = static_cast<Eigen::Index>(L);
  m.transition = Eigen::MatrixXd::Constant(n, n, 0.05 / std::max<double>(1.0, double(L - 1)));
  m.transition.diagonal().setConstant(L == 1 ? 1.0 : 0.95);
  m.initial = Eigen::VectorXd::Constant(n, 1.0 / double(L));
  return m;
}

void BM_ForwardLogLik(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const MsTModel m = SectorModel(4, L);
  const Eigen::MatrixXd y = SamplePath({m, 1000, 1}).observations;
  for (auto _ : state) benchmark::DoNotOptimize(ForwardLogLik(m, y));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ForwardLogLik)->Arg(2)->Arg(4)->Arg(6);

void BM_Smooth(benchmark::State& state) {
  const MsTModel m = SectorModel(4, 4);
  const Eigen::MatrixXd y = SamplePath({m, 1000, 2}).observations;
  for (auto _ : state) benchmark::DoNotOptimize(Smooth(m, y).loglik);
}
BENCHMARK(BM_Smooth);

void BM_EmFit(benchmark::State& state) {
  const MsTModel m = SectorModel(4, 2);
  const Eigen::MatrixXd y = SamplePath({m, 700, 3}).observations;
  for (auto _ : state) benchmark::DoNotOptimize(EmFit(y, 2, {}).loglik);
}
BENCHMARK(BM_EmFit)->Unit(benchmark::kMillisecond);

void BM_MixtureQuantile(benchmark::State& state) {
  const UnivariateMixture mix{{0.2, 0.5, 0.3}, {{0.0, 1.0, 4.0}, {-1.0, 2.0, 6.0}, {0.5, 0.7, 15.0}}};
  for (auto _ : state) benchmark::DoNotOptimize(MixtureQuantile(mix, 0.05));
}
BENCHMARK(BM_MixtureQuantile);

void BM_MultipleCoES(benchmark::State& state) {
  const MsTModel m = SectorModel(4, 4);
  const PredictiveMixture mix = BuildPredictive(m, m.initial);
  const RiskQuery q{0, {1, 2, 3}, 0.05, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(DeltaMultipleCoES(mix, q));
}
BENCHMARK(BM_MultipleCoES);

void BM_ShapleyMap(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const MsTModel m = SectorModel(p, 2);
  const CoRiskEvaluator eval(BuildPredictive(m, m.initial), 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Shapley(CharacteristicValues(eval, 0, Measure::kCoVaR, 0.05)));
  }
}
BENCHMARK(BM_ShapleyMap)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace mscorisk

BENCHMARK_MAIN();
