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

#ifndef MSCORISK_CO_RISK_HPP_
#define MSCORISK_CO_RISK_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mscorisk/ms_model.hpp"
#include "mscorisk/panel.hpp"
#include "mscorisk/predictive.hpp"

namespace mscorisk {

enum class Measure { kCoVaR, kCoES };
const char* MeasureName(Measure m);

// Where the CoES tail is cut.
enum class CoesThreshold {
  // The tau1-quantile of the conditional law itself (default).
  kConditionalQuantile,
  // The unconditional VaR_tau1 of the target under the predictive mixture.
  kUnconditionalVaR,
};

struct CoRiskOptions {
  CoesThreshold coes_threshold = CoesThreshold::kConditionalQuantile;
};

// Target i given the distress set (sitting at tau2 levels); every other
// sector sits at its median level.
struct RiskQuery {
  std::size_t target = 0;
  std::vector<std::size_t> distress;
  double tau1 = 0.05;
  double tau2 = 0.05;

  void Validate(std::size_t dim) const;
};

double MarginalVaR(const PredictiveMixture& mix, std::size_t i, double tau);
double MarginalES(const PredictiveMixture& mix, std::size_t i, double tau);

double MultipleCoVaR(const PredictiveMixture& mix, const RiskQuery& q,
                     const CoRiskOptions& options = {});
double MultipleCoES(const PredictiveMixture& mix, const RiskQuery& q,
                    const CoRiskOptions& options = {});
// Measure under the query minus the same measure with every conditioner at
// its median level. The distress set must be nonempty.
double DeltaMultipleCoVaR(const PredictiveMixture& mix, const RiskQuery& q,
                          const CoRiskOptions& options = {});
double DeltaMultipleCoES(const PredictiveMixture& mix, const RiskQuery& q,
                         const CoRiskOptions& options = {});

// Evaluates many queries against one predictive mixture and one tau2. The
// marginal conditioning levels (VaR/ES at tau2 and at 0.5 for each sector)
// and the all-at-median baselines are computed once.
class CoRiskEvaluator {
 public:
  CoRiskEvaluator(PredictiveMixture mix, double tau2, CoRiskOptions options = {});

  const PredictiveMixture& mixture() const { return mix_; }
  double tau2() const { return tau2_; }

  // Conditioning level of sector j: VaR (CoVaR) or ES (CoES) at tau2 when
  // distressed, at 0.5 otherwise.
  double Level(Measure m, std::size_t j, bool distressed) const;

  double Multiple(Measure m, std::size_t target, std::span<const std::size_t> distress,
                  double tau1) const;
  // Zero for an empty distress set.
  double Delta(Measure m, std::size_t target, std::span<const std::size_t> distress,
               double tau1) const;

  // Conditional law of the target given all other sectors at their levels.
  UnivariateMixture ConditionalLaw(Measure m, std::size_t target,
                                   std::span<const std::size_t> distress) const;

 private:
  double MeasureOf(Measure m, std::size_t target, const UnivariateMixture& law,
                   double tau1) const;

  PredictiveMixture mix_;
  double tau2_;
  CoRiskOptions options_;
  std::vector<double> weights_;
  // [measure][distressed][sector]
  std::vector<double> levels_[2][2];
};

struct RiskRecord {
  double var = 0.0;
  double es = 0.0;
  double covar = 0.0;
  double coes = 0.0;
  double delta_covar = 0.0;
  double delta_coes = 0.0;
};

struct RiskSeries {
  RiskQuery query;
  std::vector<RiskRecord> records;  // one per time index
};

struct SeriesOptions {
  int horizon = 1;
  StateProbabilities probs = StateProbabilities::kFiltered;
  CoRiskOptions co_risk;
};

// Total risk: for every sector i and time t, the measures of i with all
// other sectors distressed, on the predictive mixture built at t.
std::vector<RiskSeries> TotalRiskSeries(const FitResult& fit, double tau1, double tau2,
                                        const SeriesOptions& options = {});

// Delta series of target i given distress of j from a model fitted on the
// two-column (i, j) sub-panel; i and j index that sub-model.
std::vector<double> StandardPairwiseDelta(const FitResult& bivariate_fit, std::size_t i,
                                          std::size_t j, Measure m, double tau1, double tau2,
                                          const SeriesOptions& options = {});

// CSV: date,target,distress_set,measure,tau1,tau2,value. The distress set is
// the sorted sector names joined by '+'. Rows are labelled by the as-of date
// of the predictive mixture. VaR and DeltaCoVaR rows belong to kCoVaR, ES and
// DeltaCoES rows to kCoES; an empty `measures` writes both families.
void WriteRiskSeriesCsv(std::ostream& out, std::span<const RiskSeries> series,
                        std::span<const Date> dates, std::span<const std::string> names,
                        std::span<const Measure> measures = {});

}  // namespace mscorisk

#endif  // MSCORISK_CO_RISK_HPP_
