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

#ifndef MSCORISK_ATTRIBUTION_HPP_
#define MSCORISK_ATTRIBUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mscorisk/co_risk.hpp"

namespace mscorisk {

inline constexpr std::size_t kMaxPlayers = 20;

// Coalition values of one target: values[mask] is the Delta measure of the
// target when the players whose bits are set in `mask` are distressed. Bit b
// refers to players[b]. values[0] is exactly zero. NaN marks a missing entry.
struct CharacteristicMap {
  std::size_t target = 0;
  std::vector<std::size_t> players;
  std::vector<double> values;

  std::size_t num_players() const { return players.size(); }
  double grand_value() const { return values.back(); }
};

struct ShapleyReport {
  std::size_t target = 0;
  std::vector<std::size_t> players;
  std::vector<double> shares;  // aligned with players
  double grand_value = 0.0;
  std::size_t as_of = 0;
};

// Every nonempty coalition of the sectors other than `target`.
CharacteristicMap CharacteristicValues(const CoRiskEvaluator& eval, std::size_t target,
                                       Measure m, double tau1);
CharacteristicMap CharacteristicValues(const FitResult& fit, std::size_t t, std::size_t target,
                                       Measure m, double tau1, double tau2,
                                       const SeriesOptions& options = {});

// Exact Shapley value:
//   share_j = sum_{S not containing j} |S|! (n - |S| - 1)! / n! * (v(S + j) - v(S)).
ShapleyReport Shapley(const CharacteristicMap& map);

struct AttributionSeries {
  Measure measure = Measure::kCoVaR;
  double tau1 = 0.05;
  double tau2 = 0.05;
  std::size_t dim = 0;
  // reports[target][t]
  std::vector<std::vector<ShapleyReport>> reports;

  std::size_t num_periods() const { return reports.empty() ? 0 : reports.front().size(); }
  // Share of `contributor` in the Delta measure of `target` at t.
  double Share(std::size_t target, std::size_t contributor, std::size_t t) const;
};

AttributionSeries ComputeAttributionSeries(const FitResult& fit, Measure m, double tau1,
                                           double tau2, const SeriesOptions& options = {});

// Shares of b in the risk of a, and of a in the risk of b.
struct VisAVis {
  std::vector<double> b_on_a;
  std::vector<double> a_on_b;
};
VisAVis ExtractVisAVis(const AttributionSeries& series, std::size_t a, std::size_t b);
VisAVis ComputeVisAVis(const FitResult& fit, std::size_t a, std::size_t b, Measure m,
                       double tau1, double tau2, const SeriesOptions& options = {});

// CSV: date,target,contributor,measure,share,grand_value
void WriteAttributionCsv(std::ostream& out, const AttributionSeries& series,
                         std::span<const Date> dates, std::span<const std::string> names);
// {"schema_version":1, "measure":.., "tau1":.., "tau2":.., "dates":[{"date":..,
//   "targets":[{"target":.., "grand_value":.., "shares":{name: value}}]}]}
std::string AttributionToJson(const AttributionSeries& series, std::span<const Date> dates,
                              std::span<const std::string> names);

}  // namespace mscorisk

#endif  // MSCORISK_ATTRIBUTION_HPP_
