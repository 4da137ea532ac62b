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

#include "mscorisk/co_risk.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <tuple>

#include "mscorisk/error.hpp"
#include "mscorisk/model_io.hpp"
#include "parallel.hpp"

namespace mscorisk {

namespace {

void CheckLevel(double tau, const char* what) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must lie in (0, 1)");
  }
}

std::vector<double> Weights(const PredictiveMixture& mix) {
  return {mix.weights.data(), mix.weights.data() + mix.weights.size()};
}

UnivariateMixture Marginal(const PredictiveMixture& mix, std::size_t i) {
  if (i >= mix.dim()) throw Error(ErrorCode::kInvalidArgument, "sector index out of range");
  UnivariateMixture out;
  out.weights = Weights(mix);
  for (const auto& c : mix.components) {
    const auto k = static_cast<Eigen::Index>(i);
    out.components.push_back({c.location(k), std::sqrt(c.scale(k, k)), c.dof});
  }
  return out;
}

bool AllDofAboveOne(const PredictiveMixture& mix) {
  return std::all_of(mix.components.begin(), mix.components.end(),
                     [](const MvtParams& c) { return c.dof > 1.0; });
}

}  // namespace

const char* MeasureName(Measure m) { return m == Measure::kCoVaR ? "CoVaR" : "CoES"; }

void RiskQuery::Validate(std::size_t dim) const {
  CheckLevel(tau1, "tau1");
  CheckLevel(tau2, "tau2");
  if (target >= dim) throw Error(ErrorCode::kInvalidArgument, "target index out of range");
  std::vector<bool> seen(dim, false);
  for (auto j : distress) {
    if (j >= dim) throw Error(ErrorCode::kInvalidArgument, "distress index out of range");
    if (j == target) throw Error(ErrorCode::kInvalidArgument, "target is in the distress set");
    if (seen[j]) throw Error(ErrorCode::kInvalidArgument, "repeated distress index");
    seen[j] = true;
  }
}

double MarginalVaR(const PredictiveMixture& mix, std::size_t i, double tau) {
  return MixtureQuantile(Marginal(mix, i), tau);
}

double MarginalES(const PredictiveMixture& mix, std::size_t i, double tau) {
  return MixtureExpectedShortfall(Marginal(mix, i), tau);
}

CoRiskEvaluator::CoRiskEvaluator(PredictiveMixture mix, double tau2, CoRiskOptions options)
    : mix_(std::move(mix)), tau2_(tau2), options_(options), weights_(Weights(mix_)) {
  CheckLevel(tau2, "tau2");
  const std::size_t p = mix_.dim();
  if (p < 2) throw Error(ErrorCode::kInvalidArgument, "co-risk needs at least 2 sectors");
  const bool has_es = AllDofAboveOne(mix_);
  for (auto& by_measure : levels_) {
    for (auto& v : by_measure) v.clear();
  }
  for (std::size_t j = 0; j < p; ++j) {
    const UnivariateMixture m = Marginal(mix_, j);
    levels_[0][0].push_back(MixtureQuantile(m, 0.5));
    levels_[0][1].push_back(MixtureQuantile(m, tau2_));
    if (has_es) {
      levels_[1][0].push_back(MixtureExpectedShortfall(m, 0.5));
      levels_[1][1].push_back(MixtureExpectedShortfall(m, tau2_));
    }
  }
}

double CoRiskEvaluator::Level(Measure m, std::size_t j, bool distressed) const {
  const auto& v = levels_[m == Measure::kCoES ? 1 : 0][distressed ? 1 : 0];
  if (v.empty()) {
    throw Error(ErrorCode::kUndefinedMoment, "ES levels need every dof > 1");
  }
  if (j >= v.size()) throw Error(ErrorCode::kInvalidArgument, "sector index out of range");
  return v[j];
}

UnivariateMixture CoRiskEvaluator::ConditionalLaw(Measure m, std::size_t target,
                                                  std::span<const std::size_t> distress) const {
  const std::size_t p = mix_.dim();
  std::vector<bool> is_distressed(p, false);
  for (auto j : distress) {
    if (j >= p || j == target) {
      throw Error(ErrorCode::kInvalidArgument, "invalid distress index");
    }
    is_distressed[j] = true;
  }
  std::vector<std::size_t> cond;
  for (std::size_t j = 0; j < p; ++j) {
    if (j != target) cond.push_back(j);
  }
  Eigen::VectorXd values(static_cast<Eigen::Index>(cond.size()));
  for (std::size_t c = 0; c < cond.size(); ++c) {
    values(static_cast<Eigen::Index>(c)) = Level(m, cond[c], is_distressed[cond[c]]);
  }
  return ConditionalMixture(weights_, mix_.components, target, cond, values);
}

double CoRiskEvaluator::MeasureOf(Measure m, std::size_t target, const UnivariateMixture& law,
                                  double tau1) const {
  if (m == Measure::kCoVaR) return MixtureQuantile(law, tau1);
  if (options_.coes_threshold == CoesThreshold::kConditionalQuantile) {
    return MixtureExpectedShortfall(law, tau1);
  }
  return MixtureTailMean(law, MarginalVaR(mix_, target, tau1));
}

double CoRiskEvaluator::Multiple(Measure m, std::size_t target,
                                 std::span<const std::size_t> distress, double tau1) const {
  CheckLevel(tau1, "tau1");
  if (target >= mix_.dim()) throw Error(ErrorCode::kInvalidArgument, "target out of range");
  return MeasureOf(m, target, ConditionalLaw(m, target, distress), tau1);
}

double CoRiskEvaluator::Delta(Measure m, std::size_t target,
                              std::span<const std::size_t> distress, double tau1) const {
  if (distress.empty()) return 0.0;
  return Multiple(m, target, distress, tau1) - Multiple(m, target, {}, tau1);
}

double MultipleCoVaR(const PredictiveMixture& mix, const RiskQuery& q,
                     const CoRiskOptions& options) {
  q.Validate(mix.dim());
  return CoRiskEvaluator(mix, q.tau2, options).Multiple(Measure::kCoVaR, q.target, q.distress,
                                                        q.tau1);
}

double MultipleCoES(const PredictiveMixture& mix, const RiskQuery& q,
                    const CoRiskOptions& options) {
  q.Validate(mix.dim());
  return CoRiskEvaluator(mix, q.tau2, options).Multiple(Measure::kCoES, q.target, q.distress,
                                                        q.tau1);
}

double DeltaMultipleCoVaR(const PredictiveMixture& mix, const RiskQuery& q,
                          const CoRiskOptions& options) {
  q.Validate(mix.dim());
  if (q.distress.empty()) throw Error(ErrorCode::kInvalidArgument, "empty distress set");
  return CoRiskEvaluator(mix, q.tau2, options).Delta(Measure::kCoVaR, q.target, q.distress,
                                                     q.tau1);
}

double DeltaMultipleCoES(const PredictiveMixture& mix, const RiskQuery& q,
                         const CoRiskOptions& options) {
  q.Validate(mix.dim());
  if (q.distress.empty()) throw Error(ErrorCode::kInvalidArgument, "empty distress set");
  return CoRiskEvaluator(mix, q.tau2, options).Delta(Measure::kCoES, q.target, q.distress,
                                                     q.tau1);
}

std::vector<RiskSeries> TotalRiskSeries(const FitResult& fit, double tau1, double tau2,
                                        const SeriesOptions& options) {
  CheckLevel(tau1, "tau1");
  CheckLevel(tau2, "tau2");
  const std::size_t p = fit.model.dim();
  const auto T = static_cast<std::size_t>(fit.filtered.rows());
  std::vector<RiskSeries> out(p);
  for (std::size_t i = 0; i < p; ++i) {
    out[i].query.target = i;
    out[i].query.tau1 = tau1;
    out[i].query.tau2 = tau2;
    for (std::size_t j = 0; j < p; ++j) {
      if (j != i) out[i].query.distress.push_back(j);
    }
    out[i].records.resize(T);
  }
  internal::ParallelFor(T, [&](std::size_t t) {
    const CoRiskEvaluator eval(BuildPredictive(fit, t, options.horizon, options.probs), tau2,
                               options.co_risk);
    for (std::size_t i = 0; i < p; ++i) {
      const auto& d = out[i].query.distress;
      RiskRecord& r = out[i].records[t];
      r.var = MarginalVaR(eval.mixture(), i, tau1);
      r.es = MarginalES(eval.mixture(), i, tau1);
      r.covar = eval.Multiple(Measure::kCoVaR, i, d, tau1);
      r.coes = eval.Multiple(Measure::kCoES, i, d, tau1);
      r.delta_covar = r.covar - eval.Multiple(Measure::kCoVaR, i, {}, tau1);
      r.delta_coes = r.coes - eval.Multiple(Measure::kCoES, i, {}, tau1);
    }
  });
  return out;
}

std::vector<double> StandardPairwiseDelta(const FitResult& bivariate_fit, std::size_t i,
                                          std::size_t j, Measure m, double tau1, double tau2,
                                          const SeriesOptions& options) {
  if (bivariate_fit.model.dim() != 2) {
    throw Error(ErrorCode::kDimensionMismatch, "standard delta needs a bivariate model");
  }
  if (i > 1 || j > 1 || i == j) throw Error(ErrorCode::kInvalidArgument, "invalid pair");
  CheckLevel(tau1, "tau1");
  const auto T = static_cast<std::size_t>(bivariate_fit.filtered.rows());
  std::vector<double> out(T);
  const std::size_t distress[] = {j};
  internal::ParallelFor(T, [&](std::size_t t) {
    const CoRiskEvaluator eval(BuildPredictive(bivariate_fit, t, options.horizon, options.probs),
                               tau2, options.co_risk);
    out[t] = eval.Delta(m, i, distress, tau1);
  });
  return out;
}

void WriteRiskSeriesCsv(std::ostream& out, std::span<const RiskSeries> series,
                        std::span<const Date> dates, std::span<const std::string> names,
                        std::span<const Measure> measures) {
  const auto wanted = [&](Measure m) {
    return measures.empty() || std::find(measures.begin(), measures.end(), m) != measures.end();
  };
  out << "# mscorisk schema_version=" << kSchemaVersion << '\n';
  out << "date,target,distress_set,measure,tau1,tau2,value\n";
  for (const auto& s : series) {
    std::vector<std::string> d;
    for (auto j : s.query.distress) d.push_back(names[j]);
    std::sort(d.begin(), d.end());
    std::string joined;
    for (const auto& n : d) joined += (joined.empty() ? "" : "+") + n;
    const std::string& target = names[s.query.target];
    for (std::size_t t = 0; t < s.records.size(); ++t) {
      const RiskRecord& r = s.records[t];
      const std::string date = FormatIsoDate(dates[t]);
      const std::tuple<const char*, Measure, double> rows[] = {
          {"VaR", Measure::kCoVaR, r.var},
          {"ES", Measure::kCoES, r.es},
          {"CoVaR", Measure::kCoVaR, r.covar},
          {"CoES", Measure::kCoES, r.coes},
          {"DeltaCoVaR", Measure::kCoVaR, r.delta_covar},
          {"DeltaCoES", Measure::kCoES, r.delta_coes}};
      for (const auto& [name, family, value] : rows) {
        if (!wanted(family)) continue;
        const bool marginal = name[0] != 'C' && name[0] != 'D';
        out << date << ',' << target << ',' << (marginal ? "" : joined) << ',' << name << ','
            << FormatNumber(s.query.tau1) << ',' << FormatNumber(s.query.tau2) << ','
            << FormatNumber(value) << '\n';
      }
    }
  }
}

}  // namespace mscorisk
