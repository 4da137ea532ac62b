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

#ifndef MSCORISK_ORACLE_HPP_
#define MSCORISK_ORACLE_HPP_

// Brute-force reference computations. Nothing here calls into the forward
// recursion or the conditional-t algebra it is meant to check.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mscorisk/ms_model.hpp"
#include "mscorisk/student_t.hpp"

namespace mscorisk::oracle {

// Log-likelihood as a sum over all L^T state paths. Throws kInstanceTooLarge
// when L^T > 1e6.
double BruteForceLogLik(const MsTModel& model, const Eigen::MatrixXd& y);

struct PathPosteriors {
  double loglik = 0.0;
  Eigen::MatrixXd smoothed;  // T x L
  Eigen::MatrixXd filtered;  // T x L
};
PathPosteriors BruteForcePosteriors(const MsTModel& model, const Eigen::MatrixXd& y);

// tau-quantile of coordinate `target` given cond_idx fixed at cond_values,
// under a mixture of multivariate t's, by tabulating the joint density along
// a 1-D grid, normalizing and inverting the cumulative sum. Other
// coordinates are integrated out by block extraction.
double GridConditionalQuantile(std::span<const double> weights,
                               std::span<const MvtParams> components, std::size_t target,
                               std::span<const std::size_t> cond_idx,
                               const Eigen::Ref<const Eigen::VectorXd>& cond_values,
                               double tau);

// Mean of the same grid law below its own tau-quantile.
double GridConditionalExpectedShortfall(std::span<const double> weights,
                                        std::span<const MvtParams> components,
                                        std::size_t target,
                                        std::span<const std::size_t> cond_idx,
                                        const Eigen::Ref<const Eigen::VectorXd>& cond_values,
                                        double tau);

}  // namespace mscorisk::oracle

#endif  // MSCORISK_ORACLE_HPP_
