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

#include "mscorisk/simulate.hpp"

#include <random>

#include "mscorisk/error.hpp"
#include "parallel.hpp"

namespace mscorisk {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 StreamFor(std::uint64_t seed, std::size_t t, std::uint64_t lane) {
  return std::mt19937_64(SplitMix64(SplitMix64(seed) ^ SplitMix64(t * 4 + lane)));
}

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t Draw(const Eigen::Ref<const Eigen::RowVectorXd>& probs, double u) {
  double acc = 0.0;
  for (Eigen::Index l = 0; l < probs.size(); ++l) {
    acc += probs(l);
    if (u < acc) return static_cast<std::size_t>(l);
  }
  // u landed in the round-off gap at the top; take the last state with mass.
  for (Eigen::Index l = probs.size() - 1; l >= 0; --l) {
    if (probs(l) > 0.0) return static_cast<std::size_t>(l);
  }
  return 0;
}

}  // namespace

SimulatedPath SamplePath(const SimSpec& spec) {
  spec.model.Validate();
  const std::size_t T = spec.num_periods;
  if (T == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one period");
  const auto p = static_cast<Eigen::Index>(spec.model.dim());

  SimulatedPath out;
  out.states.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    auto rng = StreamFor(spec.seed, t, 0);
    const double u = Uniform01(rng);
    out.states[t] = t == 0 ? Draw(spec.model.initial.transpose(), u)
                           : Draw(spec.model.transition.row(
                                      static_cast<Eigen::Index>(out.states[t - 1])),
                                  u);
  }

  std::vector<Eigen::MatrixXd> factors;
  for (const auto& r : spec.model.regimes) {
    factors.push_back(Eigen::LLT<Eigen::MatrixXd>(r.scale).matrixL());
  }
  out.observations.resize(static_cast<Eigen::Index>(T), p);
  internal::ParallelFor(T, [&](std::size_t t) {
    auto rng = StreamFor(spec.seed, t, 1);
    const std::size_t s = out.states[t];
    const MvtParams& r = spec.model.regimes[s];
    std::normal_distribution<double> normal;
    std::gamma_distribution<double> gamma(0.5 * r.dof, 2.0 / r.dof);
    Eigen::VectorXd z(p);
    for (Eigen::Index k = 0; k < p; ++k) z(k) = normal(rng);
    const double w = gamma(rng);
    out.observations.row(static_cast<Eigen::Index>(t)) =
        (r.location + factors[s] * z / std::sqrt(w)).transpose();
  });
  return out;
}

std::vector<Date> WeeklyDates(const Date& start, std::size_t count) {
  std::vector<Date> out;
  out.reserve(count);
  const std::chrono::sys_days first{start};
  for (std::size_t i = 0; i < count; ++i) {
    out.emplace_back(first + std::chrono::days{7 * static_cast<long>(i)});
  }
  return out;
}

ReturnPanel PathToPanel(const SimulatedPath& path, std::vector<std::string> names,
                        const Date& start) {
  return ReturnPanel(WeeklyDates(start, static_cast<std::size_t>(path.observations.rows())),
                     std::move(names), path.observations);
}

}  // namespace mscorisk
