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

#include "mscorisk/predictive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mscorisk/error.hpp"

namespace mscorisk {

double PredictiveMixture::LogPdf(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  std::vector<double> terms;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < components.size(); ++l) {
    const double w = weights(static_cast<Eigen::Index>(l));
    if (w <= 0.0) continue;
    terms.push_back(std::log(w) + MvtLogPdf(x, components[l]));
    top = std::max(top, terms.back());
  }
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

Eigen::VectorXd PredictiveMixture::Mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t l = 0; l < components.size(); ++l) {
    m += weights(static_cast<Eigen::Index>(l)) * components[l].location;
  }
  return m;
}

Eigen::MatrixXd MatrixPower(const Eigen::MatrixXd& q, int h) {
  if (h < 0) throw Error(ErrorCode::kInvalidArgument, "negative matrix power");
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(q.rows(), q.cols());
  Eigen::MatrixXd base = q;
  for (unsigned e = static_cast<unsigned>(h); e != 0; e >>= 1) {
    if (e & 1U) result = result * base;
    if (e > 1) base = base * base;
  }
  return result;
}

Eigen::VectorXd PredictiveWeights(const Eigen::VectorXd& state_probs,
                                  const Eigen::MatrixXd& transition, int h) {
  if (h < 1) throw Error(ErrorCode::kInvalidArgument, "forecast horizon must be >= 1");
  if (transition.rows() != state_probs.size() || transition.cols() != state_probs.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "state probabilities do not match Q");
  }
  if ((state_probs.array() < 0.0).any() || std::abs(state_probs.sum() - 1.0) > 1e-10) {
    throw Error(ErrorCode::kInvalidArgument, "state probabilities are not on the simplex");
  }
  Eigen::VectorXd w = (state_probs.transpose() * MatrixPower(transition, h)).transpose();
  w = w.cwiseMax(0.0);
  return w / w.sum();
}

PredictiveMixture BuildPredictive(const MsTModel& model, const Eigen::VectorXd& state_probs,
                                  int h, std::size_t as_of) {
  PredictiveMixture mix;
  mix.weights = PredictiveWeights(state_probs, model.transition, h);
  mix.components = model.regimes;
  mix.horizon = h;
  mix.as_of = as_of;
  return mix;
}

PredictiveMixture BuildPredictive(const FitResult& fit, std::size_t t, int h,
                                  StateProbabilities probs) {
  const Eigen::MatrixXd& p =
      probs == StateProbabilities::kFiltered ? fit.filtered : fit.smoothed;
  if (t >= static_cast<std::size_t>(p.rows())) {
    throw Error(ErrorCode::kInvalidArgument,
                "time index " + std::to_string(t) + " outside the sample");
  }
  return BuildPredictive(fit.model, p.row(static_cast<Eigen::Index>(t)).transpose(), h, t);
}

}  // namespace mscorisk
