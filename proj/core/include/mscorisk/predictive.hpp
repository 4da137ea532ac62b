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

#ifndef MSCORISK_PREDICTIVE_HPP_
#define MSCORISK_PREDICTIVE_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "mscorisk/ms_model.hpp"
#include "mscorisk/student_t.hpp"

namespace mscorisk {

// h-step-ahead predictive law p(y_{t+h} | y_1..y_t): a mixture of the regime
// emission laws with chain-propagated weights.
struct PredictiveMixture {
  Eigen::VectorXd weights;
  std::vector<MvtParams> components;
  int horizon = 1;
  std::size_t as_of = 0;

  std::size_t dim() const { return components.empty() ? 0 : components.front().dim(); }
  double LogPdf(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // sum_l w_l mu_l (defined when every dof > 1)
  Eigen::VectorXd Mean() const;
};

enum class StateProbabilities { kFiltered, kSmoothed };

// Q^h by repeated squaring.
Eigen::MatrixXd MatrixPower(const Eigen::MatrixXd& q, int h);

// pi_l = sum_j (Q^h)(j, l) * state_probs(j), rows of Q being from-states.
Eigen::VectorXd PredictiveWeights(const Eigen::VectorXd& state_probs,
                                  const Eigen::MatrixXd& transition, int h);

PredictiveMixture BuildPredictive(const MsTModel& model, const Eigen::VectorXd& state_probs,
                                  int h = 1, std::size_t as_of = 0);

// Uses row t of the fit's filtered (default) or smoothed probabilities.
PredictiveMixture BuildPredictive(const FitResult& fit, std::size_t t, int h = 1,
                                  StateProbabilities probs = StateProbabilities::kFiltered);

}  // namespace mscorisk

#endif  // MSCORISK_PREDICTIVE_HPP_
