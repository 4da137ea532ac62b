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

#ifndef MSCORISK_STUDENT_T_HPP_
#define MSCORISK_STUDENT_T_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace mscorisk {

// Location / scale / degrees of freedom of a multivariate Student-t.
struct MvtParams {
  Eigen::VectorXd location;
  Eigen::MatrixXd scale;  // symmetric positive definite
  double dof = 0.0;

  std::size_t dim() const { return static_cast<std::size_t>(location.size()); }

  // Throws kNotPositiveDefinite / kInvalidArgument when the invariants fail.
  void Validate() const;
};

// Multivariate t density with the Cholesky factor of the scale cached, for
// repeated evaluation (E-steps, coalition sweeps).
class MvtDensity {
 public:
  explicit MvtDensity(const MvtParams& params);

  double LogPdf(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // (x - mu)' scale^{-1} (x - mu)
  double Mahalanobis(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  const MvtParams& params() const { return params_; }

 private:
  MvtParams params_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  double log_norm_ = 0.0;
};

double MvtLogPdf(const Eigen::Ref<const Eigen::VectorXd>& x, const MvtParams& params);

// Standard univariate t with `nu` degrees of freedom.
double TLogPdf(double z, double nu);
double TPdf(double z, double nu);
double TCdf(double z, double nu);
double TQuantile(double tau, double nu);

// Lower-tail expected shortfall of the standard t, E[Z | Z <= q_tau].
// Negative for tau < 0.5. Requires nu > 1.
double TExpectedShortfall(double tau, double nu);

// Law of the remaining coordinates of a multivariate t given the
// coordinates in `conditioned_on` are fixed. Still Student-t, with
// dof = nu + d and a scale inflated by (nu + q) / (nu + d).
struct ConditionalT {
  std::vector<std::size_t> free_indices;  // coordinates described, ascending
  Eigen::VectorXd location;
  Eigen::MatrixXd scale;
  double dof = 0.0;

  MvtParams AsParams() const { return {location, scale, dof}; }
};

ConditionalT ConditionMvt(const MvtParams& params, std::span<const std::size_t> cond_idx,
                          const Eigen::Ref<const Eigen::VectorXd>& cond_values);

// Marginal over `keep_idx` (in the given order). Degrees of freedom are kept.
MvtParams MarginalMvt(const MvtParams& params, std::span<const std::size_t> keep_idx);

struct UnivariateT {
  double location = 0.0;
  double scale = 1.0;  // standard-deviation-like scale (sqrt of the scale matrix)
  double dof = 0.0;
};

struct UnivariateMixture {
  std::vector<double> weights;
  std::vector<UnivariateT> components;
};

double MixtureCdf(const UnivariateMixture& mix, double x);
double MixturePdf(const UnivariateMixture& mix, double x);

// Solves MixtureCdf(x) = tau by bracketed root search (TOMS 748).
double MixtureQuantile(const UnivariateMixture& mix, double tau);

// E[X 1{X <= x}] for X = location + scale * T_dof. Requires dof > 1.
double TPartialExpectation(const UnivariateT& comp, double x);

// Lower-tail ES at level tau, truncating at the mixture's own tau-quantile.
double MixtureExpectedShortfall(const UnivariateMixture& mix, double tau);

// E[X | X <= threshold] under the mixture.
double MixtureTailMean(const UnivariateMixture& mix, double threshold);

// Conditional law of coordinate `target` given `cond_idx` fixed at
// `cond_values`, for a finite mixture of multivariate t's. Components are
// reweighted by their marginal density at the conditioning point (in log
// space). Coordinates in neither set are integrated out.
UnivariateMixture ConditionalMixture(std::span<const double> weights,
                                     std::span<const MvtParams> components,
                                     std::size_t target,
                                     std::span<const std::size_t> cond_idx,
                                     const Eigen::Ref<const Eigen::VectorXd>& cond_values);

}  // namespace mscorisk

#endif  // MSCORISK_STUDENT_T_HPP_
