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

#include "mscorisk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "mscorisk/error.hpp"

namespace mscorisk::oracle {

namespace {

// Multivariate t log-density from the explicit inverse and determinant.
struct DirectT {
  Eigen::VectorXd mu;
  Eigen::MatrixXd inv;
  double log_const = 0.0;
  double nu = 0.0;

  explicit DirectT(const MvtParams& p) : mu(p.location), nu(p.dof) {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(p.scale);
    inv = lu.inverse();
    const double k = static_cast<double>(mu.size());
    log_const = std::lgamma(0.5 * (nu + k)) - std::lgamma(0.5 * nu) -
                0.5 * k * std::log(nu * std::numbers::pi) - 0.5 * std::log(lu.determinant());
  }

  double LogPdf(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd d = x - mu;
    const double k = static_cast<double>(mu.size());
    return log_const - 0.5 * (nu + k) * std::log(1.0 + d.dot(inv * d) / nu);
  }
};

double LogSumExp(const std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double x : v) s += std::exp(x - top);
  return top + std::log(s);
}

double SafeLog(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

// log P(path, y_1..y_n) for the first n periods.
double PathLogJoint(const MsTModel& model, const Eigen::MatrixXd& log_emission,
                    const std::vector<std::size_t>& path, std::size_t n) {
  double lp = SafeLog(model.initial(static_cast<Eigen::Index>(path[0]))) +
              log_emission(0, static_cast<Eigen::Index>(path[0]));
  for (std::size_t t = 1; t < n; ++t) {
    lp += SafeLog(model.transition(static_cast<Eigen::Index>(path[t - 1]),
                                   static_cast<Eigen::Index>(path[t]))) +
          log_emission(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(path[t]));
  }
  return lp;
}

Eigen::MatrixXd LogEmissions(const MsTModel& model, const Eigen::MatrixXd& y) {
  Eigen::MatrixXd out(y.rows(), static_cast<Eigen::Index>(model.num_states()));
  for (std::size_t l = 0; l < model.num_states(); ++l) {
    const DirectT d(model.regimes[l]);
    for (Eigen::Index t = 0; t < y.rows(); ++t) {
      out(t, static_cast<Eigen::Index>(l)) = d.LogPdf(y.row(t).transpose());
    }
  }
  return out;
}

void CheckSize(std::size_t L, std::size_t T) {
  if (std::pow(static_cast<double>(L), static_cast<double>(T)) > 1e6) {
    throw Error(ErrorCode::kInstanceTooLarge, "path enumeration needs L^T <= 1e6");
  }
}

// Advances `path` as an odometer in base L; false once it wraps around.
bool NextPath(std::vector<std::size_t>& path, std::size_t n, std::size_t L) {
  for (std::size_t t = 0; t < n; ++t) {
    if (++path[t] < L) return true;
    path[t] = 0;
  }
  return false;
}

struct SliceLaw {
  std::vector<double> log_w;
  std::vector<DirectT> dens;   // over (target, cond...)
  Eigen::VectorXd point;       // (x, cond_values...)

  double Density(double x) {
    point(0) = x;
    std::vector<double> terms(dens.size());
    for (std::size_t l = 0; l < dens.size(); ++l) terms[l] = log_w[l] + dens[l].LogPdf(point);
    return std::exp(LogSumExp(terms));
  }
};

SliceLaw MakeSlice(std::span<const double> weights, std::span<const MvtParams> components,
                   std::size_t target, std::span<const std::size_t> cond_idx,
                   const Eigen::Ref<const Eigen::VectorXd>& cond_values) {
  std::vector<std::size_t> keep{target};
  keep.insert(keep.end(), cond_idx.begin(), cond_idx.end());
  const auto n = static_cast<Eigen::Index>(keep.size());
  SliceLaw law;
  for (std::size_t l = 0; l < components.size(); ++l) {
    if (!(weights[l] > 0.0)) continue;
    MvtParams sub;
    sub.location.resize(n);
    sub.scale.resize(n, n);
    sub.dof = components[l].dof;
    for (Eigen::Index a = 0; a < n; ++a) {
      sub.location(a) = components[l].location(static_cast<Eigen::Index>(keep[a]));
      for (Eigen::Index b = 0; b < n; ++b) {
        sub.scale(a, b) = components[l].scale(static_cast<Eigen::Index>(keep[a]),
                                              static_cast<Eigen::Index>(keep[b]));
      }
    }
    law.log_w.push_back(std::log(weights[l]));
    law.dens.emplace_back(sub);
  }
  law.point.resize(n);
  law.point.tail(n - 1) = cond_values;
  return law;
}

struct Grid {
  std::vector<double> x;
  std::vector<double> cdf;  // cumulative trapezoid, unnormalized
  double total() const { return cdf.back(); }
};

Grid Tabulate(SliceLaw& law, double lo, double hi, std::size_t nodes) {
  Grid g;
  g.x.resize(nodes);
  g.cdf.resize(nodes);
  const double h = (hi - lo) / static_cast<double>(nodes - 1);
  double prev = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    g.x[i] = lo + h * static_cast<double>(i);
    const double f = law.Density(g.x[i]);
    g.cdf[i] = i == 0 ? 0.0 : g.cdf[i - 1] + 0.5 * h * (prev + f);
    prev = f;
  }
  return g;
}

double Invert(const Grid& g, double p) {
  const double target = p * g.total();
  const auto it = std::lower_bound(g.cdf.begin(), g.cdf.end(), target);
  const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - g.cdf.begin()));
  const double c0 = g.cdf[i - 1];
  const double c1 = g.cdf[i];
  const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
  return g.x[i - 1] + frac * (g.x[i] - g.x[i - 1]);
}

// Fine grid around the bulk of the slice law, widened until the mass it
// misses is below 1e-6.
Grid ConvergedGrid(SliceLaw& law, std::span<const MvtParams> components, std::size_t target) {
  double center = 0.0;
  double spread = 0.0;
  for (const auto& c : components) {
    const auto k = static_cast<Eigen::Index>(target);
    center += c.location(k) / static_cast<double>(components.size());
    spread = std::max(spread, std::sqrt(c.scale(k, k)));
  }
  // Pilot pass locates the median and interquartile range of the slice.
  const Grid pilot = Tabulate(law, center - 200.0 * spread, center + 200.0 * spread, 400001);
  const double median = Invert(pilot, 0.5);
  const double scale = std::max((Invert(pilot, 0.75) - Invert(pilot, 0.25)) / 1.349,
                                1e-3 * spread);
  constexpr double kNodesPerScale = 500.0;
  double half_width = 60.0 * scale;
  auto make = [&](double w) {
    const auto nodes = static_cast<std::size_t>(2.0 * w / scale * kNodesPerScale) + 1;
    return Tabulate(law, median - w, median + w, std::max<std::size_t>(nodes, 20001));
  };
  Grid current = make(half_width);
  for (int expansion = 0; expansion <= 3; ++expansion) {
    Grid wider = make(2.0 * half_width);
    if (current.total() >= (1.0 - 1e-6) * wider.total()) return wider;
    if (expansion == 3) break;
    half_width *= 2.0;
    current = std::move(wider);
  }
  throw Error(ErrorCode::kNumericUnderflow, "grid oracle could not capture the slice mass");
}

}  // namespace

double BruteForceLogLik(const MsTModel& model, const Eigen::MatrixXd& y) {
  return BruteForcePosteriors(model, y).loglik;
}

PathPosteriors BruteForcePosteriors(const MsTModel& model, const Eigen::MatrixXd& y) {
  const std::size_t L = model.num_states();
  const auto T = static_cast<std::size_t>(y.rows());
  CheckSize(L, T);
  const Eigen::MatrixXd log_e = LogEmissions(model, y);
  PathPosteriors out;
  out.smoothed = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(L));
  out.filtered = out.smoothed;

  for (std::size_t n = 1; n <= T; ++n) {
    std::vector<std::size_t> path(n, 0);
    std::vector<double> log_joint;
    std::vector<std::vector<std::size_t>> paths;
    do {
      log_joint.push_back(PathLogJoint(model, log_e, path, n));
      paths.push_back(path);
    } while (NextPath(path, n, L));
    const double log_evidence = LogSumExp(log_joint);
    for (std::size_t k = 0; k < paths.size(); ++k) {
      const double post = std::exp(log_joint[k] - log_evidence);
      out.filtered(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(paths[k][n - 1])) +=
          post;
      if (n == T) {
        for (std::size_t t = 0; t < T; ++t) {
          out.smoothed(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(paths[k][t])) +=
              post;
        }
      }
    }
    if (n == T) out.loglik = log_evidence;
  }
  return out;
}

double GridConditionalQuantile(std::span<const double> weights,
                               std::span<const MvtParams> components, std::size_t target,
                               std::span<const std::size_t> cond_idx,
                               const Eigen::Ref<const Eigen::VectorXd>& cond_values,
                               double tau) {
  SliceLaw law = MakeSlice(weights, components, target, cond_idx, cond_values);
  return Invert(ConvergedGrid(law, components, target), tau);
}

double GridConditionalExpectedShortfall(std::span<const double> weights,
                                        std::span<const MvtParams> components,
                                        std::size_t target,
                                        std::span<const std::size_t> cond_idx,
                                        const Eigen::Ref<const Eigen::VectorXd>& cond_values,
                                        double tau) {
  SliceLaw law = MakeSlice(weights, components, target, cond_idx, cond_values);
  const Grid g = ConvergedGrid(law, components, target);
  const double q = Invert(g, tau);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i < g.x.size() && g.x[i - 1] < q; ++i) {
    const double hi = std::min(g.x[i], q);
    const double mass = (g.cdf[i] - g.cdf[i - 1]) * (hi - g.x[i - 1]) / (g.x[i] - g.x[i - 1]);
    num += mass * 0.5 * (g.x[i - 1] + hi);
    den += mass;
  }
  return num / den;
}

}  // namespace mscorisk::oracle
