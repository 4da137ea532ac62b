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

#ifndef MSCORISK_MS_MODEL_HPP_
#define MSCORISK_MS_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mscorisk/panel.hpp"
#include "mscorisk/student_t.hpp"

namespace mscorisk {

// L-state Markov-switching multivariate Student-t model.
//
// Transition convention used everywhere in this library: rows are the
// from-state and columns the to-state, transition(j, l) = P(S_t = l | S_{t-1} = j).
// Each row sums to one.
struct MsTModel {
  std::vector<MvtParams> regimes;
  Eigen::MatrixXd transition;
  Eigen::VectorXd initial;  // distribution of S_1

  std::size_t num_states() const { return regimes.size(); }
  std::size_t dim() const { return regimes.empty() ? 0 : regimes.front().dim(); }

  void Validate() const;
};

// Relabels states: new state i is old state perm[i].
MsTModel PermuteStates(const MsTModel& model, std::span<const std::size_t> perm);

// Posterior state probabilities from one forward-backward pass.
struct SmoothingResult {
  Eigen::MatrixXd filtered;              // T x L, P(S_t = l | y_1..y_t)
  Eigen::MatrixXd smoothed;              // T x L, P(S_t = l | y_1..y_T)
  std::vector<Eigen::MatrixXd> pairwise; // T-1 of L x L, P(S_t = j, S_{t+1} = l | y)
  double loglik = 0.0;
};

// `y` is T x p, one observation per row.
double ForwardLogLik(const MsTModel& model, const Eigen::MatrixXd& y);
double ForwardLogLik(const MsTModel& model, const ReturnPanel& panel);
SmoothingResult Smooth(const MsTModel& model, const Eigen::MatrixXd& y,
                       bool with_pairwise = true);
SmoothingResult Smooth(const MsTModel& model, const ReturnPanel& panel,
                       bool with_pairwise = true);

struct InitSpec {
  enum class Kind {
    // Blocks of the first principal component's empirical quantiles.
    kPrincipalQuantiles,
    // Nearest-of-L-random-observations clustering, seeded.
    kRandomCenters,
    // Start from `model` as given.
    kExplicit,
  };
  Kind kind = Kind::kPrincipalQuantiles;
  std::uint64_t seed = 0;
  std::optional<MsTModel> model;
};

struct EmOptions {
  double tol = 1e-8;          // relative log-likelihood change
  int max_iter = 2000;
  double min_dof = 2.1;
  double max_dof = 200.0;
  double init_dof = 8.0;
  double init_stay = 0.9;     // initial diagonal of the transition matrix
  // Reorder the fitted states by the first series' location, descending.
  bool sort_states = true;
};

struct FitResult {
  MsTModel model;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXd smoothed;
  Eigen::MatrixXd filtered;
  std::vector<double> loglik_trace;  // one entry per E-step
  // False if any step decreased the log-likelihood by more than 1e-8.
  bool monotone = true;
  std::size_t num_obs = 0;
};

MsTModel InitialModel(const Eigen::MatrixXd& y, std::size_t num_states, const InitSpec& init,
                      const EmOptions& options = {});

// ECM estimation. Throws kRegimeCollapse when a state's posterior mass falls
// below p + 2 observations.
FitResult EmFit(const Eigen::MatrixXd& y, std::size_t num_states, const InitSpec& init,
                const EmOptions& options = {});
FitResult EmFit(const ReturnPanel& panel, std::size_t num_states, const InitSpec& init,
                const EmOptions& options = {});

// Restart 0 uses the principal-quantile start, restart r > 0 random centers
// with a seed derived from (seed, r). Returns the best log-likelihood.
FitResult FitWithRestarts(const Eigen::MatrixXd& y, std::size_t num_states,
                          std::size_t num_restarts, std::uint64_t seed,
                          const EmOptions& options = {});

// A FitResult for a model that was not estimated on `y` (ground truth, or a
// model read from disk): posteriors and log-likelihood on `y`, zero iterations.
FitResult WrapModel(const MsTModel& model, const Eigen::MatrixXd& y);

// Free parameters: per state p locations, p(p+1)/2 scale entries and one dof,
// plus L(L-1) transition and L-1 initial probabilities.
std::size_t ParameterCount(std::size_t num_states, std::size_t dim);

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
};
InformationCriteria ComputeInformationCriteria(double loglik, std::size_t num_params,
                                               std::size_t num_obs);

enum class Criterion { kAic, kBic };

struct SelectionRow {
  std::size_t num_states = 0;
  bool ok = false;
  std::string error;
  double loglik = 0.0;
  std::size_t num_params = 0;
  double aic = 0.0;
  double bic = 0.0;
  std::optional<FitResult> fit;
};

struct SelectionTable {
  std::vector<SelectionRow> rows;
  std::size_t chosen = 0;  // number of states
  Criterion criterion = Criterion::kAic;
};

SelectionTable SelectNumStates(const Eigen::MatrixXd& y,
                               std::span<const std::size_t> candidates,
                               std::size_t num_restarts, std::uint64_t seed,
                               Criterion criterion = Criterion::kAic,
                               const EmOptions& options = {});

// scale = diag(scales) * correlation * diag(scales)
struct ScaleDecomposition {
  Eigen::VectorXd scales;
  Eigen::MatrixXd correlation;
};
ScaleDecomposition DecomposeScale(const Eigen::MatrixXd& scale);

}  // namespace mscorisk

#endif  // MSCORISK_MS_MODEL_HPP_
