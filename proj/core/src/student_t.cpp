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

#include "mscorisk/student_t.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "mscorisk/error.hpp"

namespace mscorisk {

namespace {

constexpr double kLogPi = 1.1447298858494002;  // log(pi)

void CheckDof(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw Error(ErrorCode::kInvalidArgument, "degrees of freedom must be positive");
  }
}

void CheckLevel(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "probability level must lie in (0, 1)");
  }
}

// Stop once the bracket is a few ulps wide (relative to its larger end).
struct NarrowBracket {
  bool operator()(double a, double b) const {
    const double w = std::abs(b - a);
    return w <= 8.0 * std::numeric_limits<double>::epsilon() *
                    std::max({std::abs(a), std::abs(b), 1e-300});
  }
};

std::vector<std::size_t> Complement(std::size_t k, std::span<const std::size_t> idx) {
  std::vector<bool> used(k, false);
  for (auto i : idx) {
    if (i >= k) throw Error(ErrorCode::kInvalidArgument, "index out of range");
    if (used[i]) throw Error(ErrorCode::kInvalidArgument, "repeated index");
    used[i] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXd Block(const Eigen::MatrixXd& m, std::span<const std::size_t> rows,
                      std::span<const std::size_t> cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    }
  }
  return out;
}

Eigen::VectorXd Gather(const Eigen::VectorXd& v, std::span<const std::size_t> idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

void CheckMixture(const UnivariateMixture& mix) {
  if (mix.weights.empty() || mix.weights.size() != mix.components.size()) {
    throw Error(ErrorCode::kInvalidArgument, "mixture weights/components mismatch");
  }
  double total = 0.0;
  for (double w : mix.weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative mixture weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorCode::kInvalidArgument, "mixture weights do not sum to 1");
  }
  for (const auto& c : mix.components) {
    CheckDof(c.dof);
    if (!(c.scale > 0.0)) throw Error(ErrorCode::kInvalidArgument, "non-positive scale");
  }
}

}  // namespace

void MvtParams::Validate() const {
  const auto k = location.size();
  if (k == 0 || scale.rows() != k || scale.cols() != k) {
    throw Error(ErrorCode::kDimensionMismatch, "location/scale dimensions disagree");
  }
  CheckDof(dof);
  const double size = std::max(1.0, scale.cwiseAbs().maxCoeff());
  if ((scale - scale.transpose()).cwiseAbs().maxCoeff() > 1e-12 * size) {
    throw Error(ErrorCode::kNotPositiveDefinite, "scale matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "scale matrix is not positive definite");
  }
}

MvtDensity::MvtDensity(const MvtParams& params) : params_(params) {
  params_.Validate();
  chol_.compute(params_.scale);
  const double k = static_cast<double>(params_.dim());
  const double nu = params_.dof;
  const double log_det_half = chol_.matrixLLT().diagonal().array().log().sum();
  log_norm_ = std::lgamma(0.5 * (nu + k)) - std::lgamma(0.5 * nu) -
              0.5 * k * (std::log(nu) + kLogPi) - log_det_half;
}

double MvtDensity::Mahalanobis(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (static_cast<std::size_t>(x.size()) != params_.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "point dimension does not match location");
  }
  const Eigen::VectorXd z = chol_.matrixL().solve(x - params_.location);
  return z.squaredNorm();
}

double MvtDensity::LogPdf(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double m = Mahalanobis(x);
  const double nu = params_.dof;
  const double k = static_cast<double>(params_.dim());
  return log_norm_ - 0.5 * (nu + k) * std::log1p(m / nu);
}

double MvtLogPdf(const Eigen::Ref<const Eigen::VectorXd>& x, const MvtParams& params) {
  return MvtDensity(params).LogPdf(x);
}

double TLogPdf(double z, double nu) {
  CheckDof(nu);
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * (std::log(nu) + kLogPi) - 0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double TPdf(double z, double nu) { return std::exp(TLogPdf(z, nu)); }

double TCdf(double z, double nu) {
  CheckDof(nu);
  if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
  return boost::math::cdf(boost::math::students_t_distribution<double>(nu), z);
}

double TQuantile(double tau, double nu) {
  CheckLevel(tau);
  CheckDof(nu);
  if (tau == 0.5) return 0.0;
  return boost::math::quantile(boost::math::students_t_distribution<double>(nu), tau);
}

double TExpectedShortfall(double tau, double nu) {
  CheckLevel(tau);
  if (!(nu > 1.0)) {
    throw Error(ErrorCode::kUndefinedMoment, "expected shortfall needs dof > 1");
  }
  const double q = TQuantile(tau, nu);
  return -TPdf(q, nu) / tau * (nu + q * q) / (nu - 1.0);
}

ConditionalT ConditionMvt(const MvtParams& params, std::span<const std::size_t> cond_idx,
                          const Eigen::Ref<const Eigen::VectorXd>& cond_values) {
  const std::size_t k = params.dim();
  if (cond_idx.empty() || cond_idx.size() >= k) {
    throw Error(ErrorCode::kInvalidArgument,
                "conditioning set must be a proper nonempty subset");
  }
  if (static_cast<std::size_t>(cond_values.size()) != cond_idx.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "conditioning values/indices mismatch");
  }
  const std::vector<std::size_t> free_idx = Complement(k, cond_idx);
  const Eigen::MatrixXd s11 = Block(params.scale, free_idx, free_idx);
  const Eigen::MatrixXd s12 = Block(params.scale, free_idx, cond_idx);
  const Eigen::MatrixXd s22 = Block(params.scale, cond_idx, cond_idx);
  Eigen::LLT<Eigen::MatrixXd> llt(s22);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "conditioning block is singular");
  }
  const Eigen::VectorXd dev = cond_values - Gather(params.location, cond_idx);
  const Eigen::VectorXd solved = llt.solve(dev);
  const double q = dev.dot(solved);
  const double d = static_cast<double>(cond_idx.size());
  const double nu = params.dof;

  ConditionalT out;
  out.free_indices = free_idx;
  out.location = Gather(params.location, free_idx) + s12 * solved;
  Eigen::MatrixXd schur = s11 - s12 * llt.solve(s12.transpose());
  schur = 0.5 * (schur + schur.transpose());
  out.scale = ((nu + q) / (nu + d)) * schur;
  out.dof = nu + d;
  return out;
}

MvtParams MarginalMvt(const MvtParams& params, std::span<const std::size_t> keep_idx) {
  if (keep_idx.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "marginal over an empty index set");
  }
  for (auto i : keep_idx) {
    if (i >= params.dim()) throw Error(ErrorCode::kInvalidArgument, "index out of range");
  }
  return {Gather(params.location, keep_idx), Block(params.scale, keep_idx, keep_idx),
          params.dof};
}

double MixtureCdf(const UnivariateMixture& mix, double x) {
  double total = 0.0;
  for (std::size_t l = 0; l < mix.weights.size(); ++l) {
    if (mix.weights[l] == 0.0) continue;
    const auto& c = mix.components[l];
    total += mix.weights[l] * TCdf((x - c.location) / c.scale, c.dof);
  }
  return total;
}

double MixturePdf(const UnivariateMixture& mix, double x) {
  double total = 0.0;
  for (std::size_t l = 0; l < mix.weights.size(); ++l) {
    if (mix.weights[l] == 0.0) continue;
    const auto& c = mix.components[l];
    total += mix.weights[l] * TPdf((x - c.location) / c.scale, c.dof) / c.scale;
  }
  return total;
}

double MixtureQuantile(const UnivariateMixture& mix, double tau) {
  CheckLevel(tau);
  CheckMixture(mix);
  // Every component cdf is <= tau below the smallest component quantile and
  // >= tau above the largest one, so these bound the mixture quantile.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < mix.weights.size(); ++l) {
    if (mix.weights[l] == 0.0) continue;
    const auto& c = mix.components[l];
    const double q = c.location + c.scale * TQuantile(tau, c.dof);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  if (!(hi > lo)) return lo;

  auto f = [&](double x) { return MixtureCdf(mix, x) - tau; };
  double f_lo = f(lo);
  double f_hi = f(hi);
  const double width = hi - lo;
  for (int k = 0; f_lo > 0.0; ++k) {
    if (k == 64) throw Error(ErrorCode::kBracketFailure, "cannot bracket mixture quantile");
    lo -= width * std::ldexp(1.0, k);
    f_lo = f(lo);
  }
  for (int k = 0; f_hi < 0.0; ++k) {
    if (k == 64) throw Error(ErrorCode::kBracketFailure, "cannot bracket mixture quantile");
    hi += width * std::ldexp(1.0, k);
    f_hi = f(hi);
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto [a, b] =
      boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, NarrowBracket{}, max_iter);
  return 0.5 * (a + b);
}

double TPartialExpectation(const UnivariateT& comp, double x) {
  if (!(comp.dof > 1.0)) {
    throw Error(ErrorCode::kUndefinedMoment, "partial expectation needs dof > 1");
  }
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  const double nu = comp.dof;
  const double z = (x - comp.location) / comp.scale;
  // integral_{-inf}^{z} u f(u) du = -(nu + z^2) / (nu - 1) f(z)
  return comp.location * TCdf(z, nu) - comp.scale * (nu + z * z) / (nu - 1.0) * TPdf(z, nu);
}

double MixtureExpectedShortfall(const UnivariateMixture& mix, double tau) {
  CheckMixture(mix);
  for (const auto& c : mix.components) {
    if (!(c.dof > 1.0)) {
      throw Error(ErrorCode::kUndefinedMoment, "expected shortfall needs dof > 1");
    }
  }
  const double var = MixtureQuantile(mix, tau);
  double total = 0.0;
  for (std::size_t l = 0; l < mix.weights.size(); ++l) {
    if (mix.weights[l] == 0.0) continue;
    total += mix.weights[l] * TPartialExpectation(mix.components[l], var);
  }
  return total / tau;
}

double MixtureTailMean(const UnivariateMixture& mix, double threshold) {
  CheckMixture(mix);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t l = 0; l < mix.weights.size(); ++l) {
    if (mix.weights[l] == 0.0) continue;
    const auto& c = mix.components[l];
    num += mix.weights[l] * TPartialExpectation(c, threshold);
    den += mix.weights[l] * TCdf((threshold - c.location) / c.scale, c.dof);
  }
  if (!(den > 0.0)) {
    throw Error(ErrorCode::kNumericUnderflow, "no mass below the tail threshold");
  }
  return num / den;
}

UnivariateMixture ConditionalMixture(std::span<const double> weights,
                                     std::span<const MvtParams> components,
                                     std::size_t target,
                                     std::span<const std::size_t> cond_idx,
                                     const Eigen::Ref<const Eigen::VectorXd>& cond_values) {
  if (weights.size() != components.size() || weights.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mixture weights/components mismatch");
  }
  if (std::find(cond_idx.begin(), cond_idx.end(), target) != cond_idx.end()) {
    throw Error(ErrorCode::kInvalidArgument, "target cannot be conditioned on");
  }
  std::vector<std::size_t> keep{target};
  keep.insert(keep.end(), cond_idx.begin(), cond_idx.end());
  std::vector<std::size_t> inner_cond(cond_idx.size());
  for (std::size_t i = 0; i < inner_cond.size(); ++i) inner_cond[i] = i + 1;

  UnivariateMixture out;
  std::vector<double> log_w(weights.size(), -std::numeric_limits<double>::infinity());
  double max_log_w = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < components.size(); ++l) {
    const MvtParams sub = MarginalMvt(components[l], keep);
    UnivariateT comp;
    if (cond_idx.empty()) {
      comp = {sub.location(0), std::sqrt(sub.scale(0, 0)), sub.dof};
      if (weights[l] > 0.0) log_w[l] = std::log(weights[l]);
    } else {
      const ConditionalT c = ConditionMvt(sub, inner_cond, cond_values);
      comp = {c.location(0), std::sqrt(c.scale(0, 0)), c.dof};
      if (weights[l] > 0.0) {
        log_w[l] = std::log(weights[l]) +
                   MvtLogPdf(cond_values, MarginalMvt(components[l], cond_idx));
      }
    }
    out.components.push_back(comp);
    max_log_w = std::max(max_log_w, log_w[l]);
  }
  if (!std::isfinite(max_log_w)) {
    throw Error(ErrorCode::kNumericUnderflow, "all mixture weights vanished");
  }
  double total = 0.0;
  for (double lw : log_w) total += std::exp(lw - max_log_w);
  for (double lw : log_w) out.weights.push_back(std::exp(lw - max_log_w) / total);
  return out;
}

}  // namespace mscorisk
