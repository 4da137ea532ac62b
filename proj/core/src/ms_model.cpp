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

#include "mscorisk/ms_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "mscorisk/error.hpp"
#include "parallel.hpp"

namespace mscorisk {

namespace {

constexpr double kMonotoneSlack = 1e-8;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct EmissionTerms {
  Eigen::MatrixXd log_density;  // T x L
  Eigen::MatrixXd mahalanobis;  // T x L
};

EmissionTerms ComputeEmissions(const MsTModel& model, const Eigen::MatrixXd& y) {
  const auto T = y.rows();
  const auto L = static_cast<Eigen::Index>(model.num_states());
  EmissionTerms out{Eigen::MatrixXd(T, L), Eigen::MatrixXd(T, L)};
  for (Eigen::Index l = 0; l < L; ++l) {
    const MvtDensity density(model.regimes[static_cast<std::size_t>(l)]);
    const double nu = density.params().dof;
    const double k = static_cast<double>(density.params().dim());
    // log density = log f(mu) - (nu + k)/2 log(1 + m/nu)
    const double log_at_mode = density.LogPdf(density.params().location);
    for (Eigen::Index t = 0; t < T; ++t) {
      const double m = density.Mahalanobis(y.row(t).transpose());
      out.mahalanobis(t, l) = m;
      out.log_density(t, l) = log_at_mode - 0.5 * (nu + k) * std::log1p(m / nu);
    }
  }
  return out;
}

// Normalized forward-backward over precomputed log emission densities.
SmoothingResult ForwardBackward(const Eigen::MatrixXd& log_b, const Eigen::MatrixXd& q,
                                const Eigen::VectorXd& initial, bool with_pairwise) {
  const auto T = log_b.rows();
  const auto L = log_b.cols();
  SmoothingResult r;
  r.filtered.resize(T, L);
  r.smoothed.resize(T, L);
  Eigen::MatrixXd scaled_b(T, L);  // exp(log_b - shift_t)
  Eigen::VectorXd norm(T);         // sum_l pred_l * scaled_b(t, l)
  r.loglik = 0.0;

  Eigen::RowVectorXd pred = initial.transpose();
  for (Eigen::Index t = 0; t < T; ++t) {
    if (t > 0) pred = r.filtered.row(t - 1) * q;
    double shift = kNegInf;
    for (Eigen::Index l = 0; l < L; ++l) {
      if (pred(l) > 0.0) shift = std::max(shift, std::log(pred(l)) + log_b(t, l));
    }
    if (!std::isfinite(shift)) {
      throw Error(ErrorCode::kNumericUnderflow,
                  "forward recursion lost all mass at t=" + std::to_string(t));
    }
    double total = 0.0;
    for (Eigen::Index l = 0; l < L; ++l) {
      scaled_b(t, l) = std::exp(log_b(t, l) - shift);
      const double a = pred(l) > 0.0 ? std::exp(std::log(pred(l)) + log_b(t, l) - shift) : 0.0;
      r.filtered(t, l) = a;
      total += a;
    }
    r.filtered.row(t) /= total;
    norm(t) = total;
    r.loglik += shift + std::log(total);
  }

  Eigen::MatrixXd beta(T, L);
  beta.row(T - 1).setOnes();
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    const Eigen::VectorXd next =
        (scaled_b.row(t + 1).array() * beta.row(t + 1).array()).matrix().transpose();
    beta.row(t) = (q * next).transpose() / norm(t + 1);
  }
  for (Eigen::Index t = 0; t < T; ++t) {
    const Eigen::RowVectorXd g = r.filtered.row(t).cwiseProduct(beta.row(t));
    r.smoothed.row(t) = g / g.sum();
  }
  if (with_pairwise) {
    r.pairwise.reserve(static_cast<std::size_t>(std::max<Eigen::Index>(T - 1, 0)));
    for (Eigen::Index t = 0; t + 1 < T; ++t) {
      Eigen::MatrixXd xi(L, L);
      for (Eigen::Index j = 0; j < L; ++j) {
        for (Eigen::Index l = 0; l < L; ++l) {
          xi(j, l) = r.filtered(t, j) * q(j, l) * scaled_b(t + 1, l) * beta(t + 1, l);
        }
      }
      r.pairwise.push_back(xi / xi.sum());
    }
  }
  return r;
}

void CheckObservations(const MsTModel& model, const Eigen::MatrixXd& y) {
  model.Validate();
  if (y.rows() < 1) throw Error(ErrorCode::kInvalidArgument, "no observations");
  if (static_cast<std::size_t>(y.cols()) != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "observation dimension " + std::to_string(y.cols()) +
                    " does not match model dimension " + std::to_string(model.dim()));
  }
}

MvtParams MomentStart(const Eigen::MatrixXd& y, std::span<const Eigen::Index> rows,
                      double dof) {
  const auto p = y.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (auto t : rows) mean += y.row(t).transpose();
  mean /= static_cast<double>(rows.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  for (auto t : rows) {
    const Eigen::VectorXd d = y.row(t).transpose() - mean;
    cov += d * d.transpose();
  }
  cov /= std::max<double>(1.0, static_cast<double>(rows.size()) - 1.0);
  // A t with this scale has covariance cov.
  Eigen::MatrixXd scale = cov * ((dof - 2.0) / dof);
  const double ridge = 1e-6 * std::max(scale.trace() / static_cast<double>(p), 1e-300);
  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  if (llt.info() != Eigen::Success) scale += ridge * Eigen::MatrixXd::Identity(p, p);
  return {mean, scale, dof};
}

MsTModel ChainStart(std::vector<MvtParams> regimes, const EmOptions& options) {
  const auto L = static_cast<Eigen::Index>(regimes.size());
  MsTModel model;
  model.regimes = std::move(regimes);
  if (L == 1) {
    model.transition = Eigen::MatrixXd::Ones(1, 1);
  } else {
    model.transition = Eigen::MatrixXd::Constant(L, L, (1.0 - options.init_stay) /
                                                           static_cast<double>(L - 1));
    model.transition.diagonal().setConstant(options.init_stay);
  }
  model.initial = Eigen::VectorXd::Constant(L, 1.0 / static_cast<double>(L));
  return model;
}

MsTModel PrincipalQuantileStart(const Eigen::MatrixXd& y, std::size_t num_states,
                                const EmOptions& options) {
  const Eigen::RowVectorXd mean = y.colwise().mean();
  const Eigen::MatrixXd centered = y.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd axis = eig.eigenvectors().col(cov.cols() - 1);
  // Fix the sign so that the ordering does not depend on the eigensolver.
  if (axis.sum() < 0.0) axis = -axis;
  const Eigen::VectorXd scores = centered * axis;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(y.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return scores(a) < scores(b); });
  std::vector<MvtParams> regimes;
  const std::size_t T = order.size();
  for (std::size_t l = 0; l < num_states; ++l) {
    const std::size_t begin = l * T / num_states;
    const std::size_t end = (l + 1) * T / num_states;
    regimes.push_back(MomentStart(
        y, std::span<const Eigen::Index>(order.data() + begin, end - begin), options.init_dof));
  }
  return ChainStart(std::move(regimes), options);
}

MsTModel RandomCenterStart(const Eigen::MatrixXd& y, std::size_t num_states,
                           std::uint64_t seed, const EmOptions& options) {
  const auto T = y.rows();
  const auto p = y.cols();
  std::mt19937_64 rng(SplitMix64(seed));
  const Eigen::RowVectorXd mean = y.colwise().mean();
  const Eigen::MatrixXd centered = y.rowwise() - mean;
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(T);
  cov += 1e-12 * std::max(cov.trace(), 1e-300) * Eigen::MatrixXd::Identity(p, p);
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);

  std::vector<Eigen::Index> all(static_cast<std::size_t>(T));
  std::iota(all.begin(), all.end(), 0);
  std::vector<Eigen::Index> centers;
  std::sample(all.begin(), all.end(), std::back_inserter(centers),
              static_cast<std::ptrdiff_t>(num_states), rng);

  std::vector<std::vector<Eigen::Index>> groups(num_states);
  for (Eigen::Index t = 0; t < T; ++t) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < num_states; ++l) {
      const Eigen::VectorXd d = llt.matrixL().solve((y.row(t) - y.row(centers[l])).transpose());
      if (d.squaredNorm() < best_d) {
        best_d = d.squaredNorm();
        best = l;
      }
    }
    groups[best].push_back(t);
  }
  const auto min_size = static_cast<std::size_t>(p + 2);
  const bool too_small = std::any_of(groups.begin(), groups.end(),
                                     [&](const auto& g) { return g.size() < min_size; });
  if (too_small) {
    std::shuffle(all.begin(), all.end(), rng);
    for (auto& g : groups) g.clear();
    for (std::size_t i = 0; i < all.size(); ++i) groups[i % num_states].push_back(all[i]);
  }
  std::vector<MvtParams> regimes;
  for (const auto& g : groups) regimes.push_back(MomentStart(y, g, options.init_dof));
  return ChainStart(std::move(regimes), options);
}

// Root of the ECM degrees-of-freedom equation
//   log(nu/2) - digamma(nu/2) + 1 + c = 0,
// clamped to [lo, hi]. The left-hand side decreases in nu.
double SolveDof(double c, double lo, double hi) {
  auto g = [c](double nu) {
    return std::log(0.5 * nu) - boost::math::digamma(0.5 * nu) + 1.0 + c;
  };
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo <= 0.0) return lo;
  if (g_hi >= 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      g, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  return 0.5 * (a + b);
}

Eigen::MatrixXd RegularizedScale(Eigen::MatrixXd s) {
  s = 0.5 * (s + s.transpose());
  const auto p = s.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    s += 1e-8 * s.trace() / static_cast<double>(p) * Eigen::MatrixXd::Identity(p, p);
  }
  return s;
}

std::vector<std::size_t> FirstSeriesDescending(const MsTModel& model) {
  std::vector<std::size_t> perm(model.num_states());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return model.regimes[a].location(0) > model.regimes[b].location(0);
  });
  return perm;
}

Eigen::MatrixXd PermuteColumns(const Eigen::MatrixXd& m, std::span<const std::size_t> perm) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = m.col(static_cast<Eigen::Index>(perm[i]));
  }
  return out;
}

}  // namespace

void MsTModel::Validate() const {
  const auto L = static_cast<Eigen::Index>(regimes.size());
  if (L == 0) throw Error(ErrorCode::kInvalidArgument, "model has no states");
  if (transition.rows() != L || transition.cols() != L || initial.size() != L) {
    throw Error(ErrorCode::kDimensionMismatch, "transition/initial size does not match L");
  }
  for (const auto& r : regimes) {
    r.Validate();
    if (r.dim() != regimes.front().dim()) {
      throw Error(ErrorCode::kDimensionMismatch, "regimes have different dimensions");
    }
  }
  constexpr double kTol = 1e-12;
  for (Eigen::Index j = 0; j < L; ++j) {
    for (Eigen::Index l = 0; l < L; ++l) {
      if (!(transition(j, l) >= 0.0 && transition(j, l) <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "transition entry outside [0, 1]");
      }
    }
    if (std::abs(transition.row(j).sum() - 1.0) > kTol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transition row " + std::to_string(j) + " does not sum to 1");
    }
  }
  if ((initial.array() < 0.0).any() || std::abs(initial.sum() - 1.0) > kTol) {
    throw Error(ErrorCode::kInvalidArgument, "initial distribution is not on the simplex");
  }
}

MsTModel PermuteStates(const MsTModel& model, std::span<const std::size_t> perm) {
  const std::size_t L = model.num_states();
  if (perm.size() != L) throw Error(ErrorCode::kInvalidArgument, "bad state permutation");
  MsTModel out;
  out.transition.resize(model.transition.rows(), model.transition.cols());
  out.initial.resize(model.initial.size());
  for (std::size_t i = 0; i < L; ++i) {
    if (perm[i] >= L) throw Error(ErrorCode::kInvalidArgument, "bad state permutation");
    out.regimes.push_back(model.regimes[perm[i]]);
    out.initial(static_cast<Eigen::Index>(i)) = model.initial(static_cast<Eigen::Index>(perm[i]));
    for (std::size_t j = 0; j < L; ++j) {
      out.transition(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          model.transition(static_cast<Eigen::Index>(perm[i]),
                           static_cast<Eigen::Index>(perm[j]));
    }
  }
  return out;
}

double ForwardLogLik(const MsTModel& model, const Eigen::MatrixXd& y) {
  return Smooth(model, y, false).loglik;
}

double ForwardLogLik(const MsTModel& model, const ReturnPanel& panel) {
  return ForwardLogLik(model, panel.returns());
}

SmoothingResult Smooth(const MsTModel& model, const Eigen::MatrixXd& y, bool with_pairwise) {
  CheckObservations(model, y);
  const EmissionTerms e = ComputeEmissions(model, y);
  return ForwardBackward(e.log_density, model.transition, model.initial, with_pairwise);
}

SmoothingResult Smooth(const MsTModel& model, const ReturnPanel& panel, bool with_pairwise) {
  return Smooth(model, panel.returns(), with_pairwise);
}

MsTModel InitialModel(const Eigen::MatrixXd& y, std::size_t num_states, const InitSpec& init,
                      const EmOptions& options) {
  if (num_states == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one state");
  switch (init.kind) {
    case InitSpec::Kind::kPrincipalQuantiles:
      return PrincipalQuantileStart(y, num_states, options);
    case InitSpec::Kind::kRandomCenters:
      return RandomCenterStart(y, num_states, init.seed, options);
    case InitSpec::Kind::kExplicit:
      if (!init.model || init.model->num_states() != num_states) {
        throw Error(ErrorCode::kInvalidArgument, "explicit start does not have L states");
      }
      return *init.model;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown initialization");
}

FitResult EmFit(const Eigen::MatrixXd& y, std::size_t num_states, const InitSpec& init,
                const EmOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be > 0");
  if (num_states == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one state");
  const auto T = y.rows();
  const auto p = y.cols();
  if (T < 10 * p) {
    throw Error(ErrorCode::kInvalidArgument,
                "fitting needs T >= 10 p observations (T=" + std::to_string(T) + ")");
  }
  const auto L = static_cast<Eigen::Index>(num_states);
  const double dim = static_cast<double>(p);

  FitResult fit;
  fit.num_obs = static_cast<std::size_t>(T);
  fit.model = InitialModel(y, num_states, init, options);
  CheckObservations(fit.model, y);

  double prev = kNegInf;
  SmoothingResult post;
  for (int iter = 0;; ++iter) {
    const EmissionTerms e = ComputeEmissions(fit.model, y);
    post = ForwardBackward(e.log_density, fit.model.transition, fit.model.initial, true);
    fit.loglik_trace.push_back(post.loglik);
    fit.iterations = iter;
    if (std::isfinite(prev) && post.loglik < prev - kMonotoneSlack) fit.monotone = false;
    if (std::isfinite(prev) && std::abs(post.loglik - prev) < options.tol * std::abs(prev)) {
      fit.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;
    prev = post.loglik;

    MsTModel next;
    next.initial = post.smoothed.row(0).transpose();
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(L, L);
    for (const auto& xi : post.pairwise) counts += xi;
    next.transition.resize(L, L);
    for (Eigen::Index j = 0; j < L; ++j) {
      const double row = counts.row(j).sum();
      if (row > 0.0) {
        next.transition.row(j) = counts.row(j) / row;
      } else {
        next.transition.row(j) = fit.model.transition.row(j);
      }
    }
    for (Eigen::Index l = 0; l < L; ++l) {
      const MvtParams& old = fit.model.regimes[static_cast<std::size_t>(l)];
      const Eigen::VectorXd gamma = post.smoothed.col(l);
      const double mass = gamma.sum();
      if (mass < dim + 2.0) {
        throw Error(ErrorCode::kRegimeCollapse,
                    "state " + std::to_string(l) + " collapsed (posterior mass " +
                        std::to_string(mass) + ")");
      }
      const Eigen::ArrayXd u =
          (old.dof + dim) / (old.dof + e.mahalanobis.col(l).array());
      const Eigen::VectorXd w = (gamma.array() * u).matrix();
      const Eigen::VectorXd mu = (y.transpose() * w) / w.sum();
      const Eigen::MatrixXd centered = y.rowwise() - mu.transpose();
      Eigen::MatrixXd scale =
          centered.transpose() * w.asDiagonal() * centered / mass;
      scale = RegularizedScale(std::move(scale));

      const double half = 0.5 * (old.dof + dim);
      const double c = (gamma.array() * (u.log() - u)).sum() / mass +
                       boost::math::digamma(half) - std::log(half);
      const double nu = SolveDof(c, options.min_dof, options.max_dof);
      next.regimes.push_back({mu, scale, nu});
    }
    fit.model = std::move(next);
  }

  fit.loglik = post.loglik;
  fit.smoothed = std::move(post.smoothed);
  fit.filtered = std::move(post.filtered);
  if (options.sort_states && num_states > 1) {
    const auto perm = FirstSeriesDescending(fit.model);
    fit.model = PermuteStates(fit.model, perm);
    fit.smoothed = PermuteColumns(fit.smoothed, perm);
    fit.filtered = PermuteColumns(fit.filtered, perm);
  }
  return fit;
}

FitResult EmFit(const ReturnPanel& panel, std::size_t num_states, const InitSpec& init,
                const EmOptions& options) {
  return EmFit(panel.returns(), num_states, init, options);
}

FitResult FitWithRestarts(const Eigen::MatrixXd& y, std::size_t num_states,
                          std::size_t num_restarts, std::uint64_t seed,
                          const EmOptions& options) {
  if (num_restarts == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one restart");
  std::vector<std::optional<FitResult>> fits(num_restarts);
  std::vector<std::string> errors(num_restarts);
  internal::ParallelFor(num_restarts, [&](std::size_t r) {
    InitSpec init;
    if (r == 0) {
      init.kind = InitSpec::Kind::kPrincipalQuantiles;
      init.seed = seed;
    } else {
      init.kind = InitSpec::Kind::kRandomCenters;
      init.seed = SplitMix64(seed ^ (0xD1B54A32D192ED03ULL * r));
    }
    try {
      fits[r] = EmFit(y, num_states, init, options);
    } catch (const Error& err) {
      errors[r] = err.what();
    }
  });
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < num_restarts; ++r) {
    if (fits[r] && (!best || fits[r]->loglik > fits[*best]->loglik)) best = r;
  }
  if (!best) {
    throw Error(ErrorCode::kFitFailed, "all " + std::to_string(num_restarts) +
                                           " restarts failed; last error: " + errors.back());
  }
  return std::move(*fits[*best]);
}

FitResult WrapModel(const MsTModel& model, const Eigen::MatrixXd& y) {
  model.Validate();
  SmoothingResult post = Smooth(model, y, false);
  FitResult out;
  out.model = model;
  out.loglik = post.loglik;
  out.converged = true;
  out.smoothed = std::move(post.smoothed);
  out.filtered = std::move(post.filtered);
  out.loglik_trace = {out.loglik};
  out.num_obs = static_cast<std::size_t>(y.rows());
  return out;
}

std::size_t ParameterCount(std::size_t num_states, std::size_t dim) {
  const std::size_t per_state = dim + dim * (dim + 1) / 2 + 1;
  return num_states * per_state + num_states * (num_states - 1) + (num_states - 1);
}

InformationCriteria ComputeInformationCriteria(double loglik, std::size_t num_params,
                                               std::size_t num_obs) {
  const double k = static_cast<double>(num_params);
  return {-2.0 * loglik + 2.0 * k,
          -2.0 * loglik + k * std::log(static_cast<double>(num_obs))};
}

SelectionTable SelectNumStates(const Eigen::MatrixXd& y,
                               std::span<const std::size_t> candidates,
                               std::size_t num_restarts, std::uint64_t seed,
                               Criterion criterion, const EmOptions& options) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "empty range of L");
  SelectionTable table;
  table.criterion = criterion;
  const auto T = static_cast<std::size_t>(y.rows());
  const auto p = static_cast<std::size_t>(y.cols());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t L : candidates) {
    SelectionRow row;
    row.num_states = L;
    row.num_params = ParameterCount(L, p);
    try {
      FitResult fit = FitWithRestarts(y, L, num_restarts, seed, options);
      row.loglik = fit.loglik;
      const auto ic = ComputeInformationCriteria(fit.loglik, row.num_params, T);
      row.aic = ic.aic;
      row.bic = ic.bic;
      row.ok = true;
      row.fit = std::move(fit);
      const double score = criterion == Criterion::kAic ? row.aic : row.bic;
      if (score < best) {
        best = score;
        table.chosen = L;
      }
    } catch (const Error& err) {
      row.error = err.what();
    }
    table.rows.push_back(std::move(row));
  }
  if (table.chosen == 0) throw Error(ErrorCode::kFitFailed, "no candidate L could be fitted");
  return table;
}

ScaleDecomposition DecomposeScale(const Eigen::MatrixXd& scale) {
  if (scale.rows() != scale.cols() || scale.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "scale must be square");
  }
  if ((scale.diagonal().array() <= 0.0).any()) {
    throw Error(ErrorCode::kNotPositiveDefinite, "scale has a non-positive diagonal");
  }
  ScaleDecomposition out;
  out.scales = scale.diagonal().cwiseSqrt();
  const Eigen::VectorXd inv = out.scales.cwiseInverse();
  out.correlation = inv.asDiagonal() * scale * inv.asDiagonal();
  out.correlation.diagonal().setOnes();
  return out;
}

}  // namespace mscorisk
