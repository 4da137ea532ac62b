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

#include "mscorisk/attribution.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"
#include "mscorisk/error.hpp"
#include "mscorisk/model_io.hpp"
#include "parallel.hpp"

namespace mscorisk {

namespace {

std::vector<std::size_t> OtherSectors(std::size_t dim, std::size_t target) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < dim; ++j) {
    if (j != target) out.push_back(j);
  }
  return out;
}

// 1 / (n * C(n - 1, s)) = s! (n - s - 1)! / n!
std::vector<double> ShapleyWeights(std::size_t n) {
  std::vector<double> binom(n, 1.0);
  for (std::size_t s = 1; s < n; ++s) {
    binom[s] = binom[s - 1] * static_cast<double>(n - s) / static_cast<double>(s);
  }
  std::vector<double> w(n);
  for (std::size_t s = 0; s < n; ++s) w[s] = 1.0 / (static_cast<double>(n) * binom[s]);
  return w;
}

}  // namespace

CharacteristicMap CharacteristicValues(const CoRiskEvaluator& eval, std::size_t target,
                                       Measure m, double tau1) {
  const std::size_t dim = eval.mixture().dim();
  if (target >= dim) throw Error(ErrorCode::kInvalidArgument, "target out of range");
  CharacteristicMap map;
  map.target = target;
  map.players = OtherSectors(dim, target);
  const std::size_t n = map.players.size();
  if (n > kMaxPlayers) {
    throw Error(ErrorCode::kInstanceTooLarge, "coalition enumeration limited to 20 players");
  }
  const std::size_t num_masks = std::size_t{1} << n;
  map.values.assign(num_masks, 0.0);
  const double baseline = eval.Multiple(m, target, {}, tau1);
  std::vector<std::size_t> coalition;
  for (std::size_t mask = 1; mask < num_masks; ++mask) {
    coalition.clear();
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) coalition.push_back(map.players[b]);
    }
    map.values[mask] = eval.Multiple(m, target, coalition, tau1) - baseline;
  }
  return map;
}

CharacteristicMap CharacteristicValues(const FitResult& fit, std::size_t t, std::size_t target,
                                       Measure m, double tau1, double tau2,
                                       const SeriesOptions& options) {
  const CoRiskEvaluator eval(BuildPredictive(fit, t, options.horizon, options.probs), tau2,
                             options.co_risk);
  return CharacteristicValues(eval, target, m, tau1);
}

ShapleyReport Shapley(const CharacteristicMap& map) {
  const std::size_t n = map.num_players();
  if (n == 0 || n > kMaxPlayers) {
    throw Error(ErrorCode::kInvalidArgument, "characteristic map needs 1..20 players");
  }
  const std::size_t num_masks = std::size_t{1} << n;
  if (map.values.size() != num_masks) {
    throw Error(ErrorCode::kIncompleteMap, "characteristic map does not cover every coalition");
  }
  for (double v : map.values) {
    if (std::isnan(v)) throw Error(ErrorCode::kIncompleteMap, "characteristic map has gaps");
  }
  const std::vector<double> weight = ShapleyWeights(n);
  ShapleyReport report;
  report.target = map.target;
  report.players = map.players;
  report.shares.assign(n, 0.0);
  report.grand_value = map.values[num_masks - 1] - map.values[0];
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double share = 0.0;
    for (std::size_t mask = 0; mask < num_masks; ++mask) {
      if (mask & bit) continue;
      const auto s = static_cast<std::size_t>(std::popcount(mask));
      share += weight[s] * (map.values[mask | bit] - map.values[mask]);
    }
    report.shares[j] = share;
  }
  return report;
}

double AttributionSeries::Share(std::size_t target, std::size_t contributor,
                                std::size_t t) const {
  if (target >= reports.size() || t >= reports[target].size()) {
    throw Error(ErrorCode::kInvalidArgument, "attribution index out of range");
  }
  const ShapleyReport& r = reports[target][t];
  for (std::size_t k = 0; k < r.players.size(); ++k) {
    if (r.players[k] == contributor) return r.shares[k];
  }
  throw Error(ErrorCode::kInvalidArgument, "contributor is not a player for this target");
}

AttributionSeries ComputeAttributionSeries(const FitResult& fit, Measure m, double tau1,
                                           double tau2, const SeriesOptions& options) {
  AttributionSeries out;
  out.measure = m;
  out.tau1 = tau1;
  out.tau2 = tau2;
  out.dim = fit.model.dim();
  const auto T = static_cast<std::size_t>(fit.filtered.rows());
  out.reports.assign(out.dim, std::vector<ShapleyReport>(T));
  internal::ParallelFor(T, [&](std::size_t t) {
    const CoRiskEvaluator eval(BuildPredictive(fit, t, options.horizon, options.probs), tau2,
                               options.co_risk);
    for (std::size_t i = 0; i < out.dim; ++i) {
      ShapleyReport r = Shapley(CharacteristicValues(eval, i, m, tau1));
      r.as_of = t;
      out.reports[i][t] = std::move(r);
    }
  });
  return out;
}

VisAVis ExtractVisAVis(const AttributionSeries& series, std::size_t a, std::size_t b) {
  if (a == b || a >= series.dim || b >= series.dim) {
    throw Error(ErrorCode::kInvalidArgument, "vis-a-vis needs two distinct sectors");
  }
  VisAVis out;
  for (std::size_t t = 0; t < series.num_periods(); ++t) {
    out.b_on_a.push_back(series.Share(a, b, t));
    out.a_on_b.push_back(series.Share(b, a, t));
  }
  return out;
}

VisAVis ComputeVisAVis(const FitResult& fit, std::size_t a, std::size_t b, Measure m,
                       double tau1, double tau2, const SeriesOptions& options) {
  if (a == b || a >= fit.model.dim() || b >= fit.model.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "vis-a-vis needs two distinct sectors");
  }
  return ExtractVisAVis(ComputeAttributionSeries(fit, m, tau1, tau2, options), a, b);
}

void WriteAttributionCsv(std::ostream& out, const AttributionSeries& series,
                         std::span<const Date> dates, std::span<const std::string> names) {
  out << "# mscorisk schema_version=" << kSchemaVersion << '\n';
  out << "date,target,contributor,measure,share,grand_value\n";
  const std::string measure = std::string("Delta") + MeasureName(series.measure);
  for (std::size_t t = 0; t < series.num_periods(); ++t) {
    const std::string date = FormatIsoDate(dates[t]);
    for (std::size_t i = 0; i < series.dim; ++i) {
      const ShapleyReport& r = series.reports[i][t];
      for (std::size_t k = 0; k < r.players.size(); ++k) {
        out << date << ',' << names[i] << ',' << names[r.players[k]] << ',' << measure << ','
            << FormatNumber(r.shares[k]) << ',' << FormatNumber(r.grand_value) << '\n';
      }
    }
  }
}

std::string AttributionToJson(const AttributionSeries& series, std::span<const Date> dates,
                              std::span<const std::string> names) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["measure"] = std::string("Delta") + MeasureName(series.measure);
  j["tau1"] = series.tau1;
  j["tau2"] = series.tau2;
  json records = json::array();
  for (std::size_t t = 0; t < series.num_periods(); ++t) {
    json targets = json::array();
    for (std::size_t i = 0; i < series.dim; ++i) {
      const ShapleyReport& r = series.reports[i][t];
      json shares = json::object();
      for (std::size_t k = 0; k < r.players.size(); ++k) {
        shares[names[r.players[k]]] = r.shares[k];
      }
      targets.push_back(
          {{"target", names[i]}, {"grand_value", r.grand_value}, {"shares", shares}});
    }
    records.push_back({{"date", FormatIsoDate(dates[t])}, {"targets", targets}});
  }
  j["dates"] = std::move(records);
  return j.dump(2);
}

}  // namespace mscorisk
