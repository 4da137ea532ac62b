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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--allow-fail 6,8] [--only 1,2,...]
//
// Exit status is 0 when every failing criterion appears in --allow-fail.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "mscorisk/attribution.hpp"
#include "mscorisk/co_risk.hpp"
#include "mscorisk/ms_model.hpp"
#include "mscorisk/oracle.hpp"
#include "mscorisk/predictive.hpp"
#include "mscorisk/simulate.hpp"
#include "mscorisk/student_t.hpp"
#include "test_support.hpp"

namespace mscorisk::acceptance {
namespace {

using testing::Rng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Runs f(0..n-1) over the hardware threads.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& f) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// 1. AIC identity against reference log-likelihood and AIC values (p = 4).

Outcome AicIdentity() {
  struct Row {
    std::size_t L;
    double loglik;
    double aic;
    std::size_t k;
  };
  const Row rows[] = {{2, 11889.544, -23713.088, 33},
                      {3, 11713.089, -23320.177, 53},
                      {4, 11969.138, -23788.276, 75},
                      {5, 11946.912, -23695.824, 99},
                      {6, 11973.013, -23696.025, 125}};
  bool ok = true;
  double worst = 0.0;
  for (const Row& r : rows) {
    const std::size_t k = ParameterCount(r.L, 4);
    const double aic = ComputeInformationCriteria(r.loglik, k, 1).aic;
    worst = std::max(worst, std::abs(aic - r.aic));
    ok = ok && k == r.k && std::abs(aic - r.aic) <= 1e-3 + 1e-9;
  }
  return {ok, Fmt("k = 33/53/75/99/125 %s, max |AIC - reference| = %.4g (tol 1e-3)",
                  ok ? "matched" : "MISMATCH", worst)};
}

// ---------------------------------------------------------------------------
// 2. Forward recursion and smoother against path enumeration.

Outcome ForwardOracle() {
  double worst_ll = 0.0, worst_post = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    Rng rng(1000 + static_cast<std::uint64_t>(inst));
    const std::size_t L = 2 + static_cast<std::size_t>(inst % 2);
    const std::size_t p = 1 + static_cast<std::size_t>((inst / 2) % 2);
    const MsTModel m = testing::RandomModel(L, p, rng);
    const Eigen::MatrixXd y = SamplePath({m, 5, static_cast<std::uint64_t>(inst)}).observations;
    const oracle::PathPosteriors brute = oracle::BruteForcePosteriors(m, y);
    const SmoothingResult fb = Smooth(m, y, false);
    worst_ll = std::max({worst_ll, std::abs(ForwardLogLik(m, y) - oracle::BruteForceLogLik(m, y)),
                         std::abs(fb.loglik - brute.loglik)});
    worst_post = std::max({worst_post, (fb.smoothed - brute.smoothed).cwiseAbs().maxCoeff(),
                           (fb.filtered - brute.filtered).cwiseAbs().maxCoeff()});
  }
  const bool ok = worst_ll <= 1e-10 && worst_post <= 1e-10;
  return {ok, Fmt("50 instances (T=5, L in {2,3}, p in {1,2}): max |dloglik| = %.2e, "
                  "max |dposterior| = %.2e (tol 1e-10)",
                  worst_ll, worst_post)};
}

// ---------------------------------------------------------------------------
// 3. EM recovery on well-separated simulated panels.

MsTModel RecoveryTruth() {
  auto regime = [](double mu, double sd, double rho, double nu) {
    MvtParams r;
    r.location = Eigen::Vector3d::Constant(mu);
    r.scale = Eigen::Matrix3d::Constant(rho * sd * sd);
    r.scale.diagonal().setConstant(sd * sd);
    r.dof = nu;
    return r;
  };
  MsTModel m;
  m.regimes = {regime(0.6, 1.0, 0.3, 5.0), regime(-0.9, 2.0, 0.6, 4.0)};
  m.transition.resize(2, 2);
  m.transition << 0.97, 0.03, 0.03, 0.97;
  m.initial = Eigen::Vector2d(0.5, 0.5);
  return m;
}

Outcome EmRecovery() {
  const MsTModel truth = RecoveryTruth();
  const int runs = 20;
  std::vector<int> good(runs, 0);
  std::vector<std::string> why(runs);
  ParallelFor(runs, [&](std::size_t run) {
    const Eigen::MatrixXd y = SamplePath({truth, 2000, 500 + run}).observations;
    const FitResult fit = FitWithRestarts(y, 2, 5, 7000 + run);
    const MsTModel& m = fit.model;  // states sorted by first-series location, descending
    double loc = 0.0, q = 0.0, nu = 0.0;
    for (std::size_t l = 0; l < 2; ++l) {
      const MvtParams& t = truth.regimes[l];
      const MvtParams& f = m.regimes[l];
      for (Eigen::Index j = 0; j < 3; ++j) {
        loc = std::max(loc, std::abs(f.location(j) - t.location(j)) / std::sqrt(t.scale(j, j)));
      }
      nu = std::max(nu, std::abs(f.dof - t.dof) / t.dof);
    }
    q = (m.transition - truth.transition).cwiseAbs().maxCoeff();
    good[run] = loc <= 0.1 && q <= 0.05 && nu <= 0.3;
    why[run] = Fmt("loc %.3f Q %.3f nu %.2f", loc, q, nu);
  });
  const int hits = std::accumulate(good.begin(), good.end(), 0);
  std::string misses;
  for (int r = 0; r < runs; ++r) {
    if (!good[r]) misses += Fmt(" [run %d: %s]", r, why[r].c_str());
  }
  return {hits >= 18, Fmt("%d/20 runs within tolerance (need 18)%s", hits, misses.c_str())};
}

// ---------------------------------------------------------------------------
// 4. Conditional Student-t quantiles against the density-grid oracle.

Outcome ConditionalT() {
  const int n = 100;
  std::vector<double> err(n, 0.0);
  ParallelFor(n, [&](std::size_t inst) {
    Rng rng(2000 + inst);
    const std::size_t k = 2 + inst % 3;
    const std::size_t comps_count = inst < 50 ? 1 : 4;
    std::vector<MvtParams> comps;
    for (std::size_t c = 0; c < comps_count; ++c) comps.push_back(testing::RandomMvt(k, rng));
    const std::vector<double> w = comps_count == 1 ? std::vector<double>{1.0}
                                                    : testing::RandomSimplex(comps_count, rng);
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t d = 1 + rng() % std::min<std::size_t>(3, k - 1);
    const std::size_t target = order[0];
    std::vector<std::size_t> cond(order.begin() + 1, order.begin() + 1 + static_cast<long>(d));
    std::sort(cond.begin(), cond.end());
    std::normal_distribution<double> g;
    Eigen::VectorXd at(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      const auto c = static_cast<Eigen::Index>(cond[j]);
      at(static_cast<Eigen::Index>(j)) =
          comps[0].location(c) + 1.5 * g(rng) * std::sqrt(comps[0].scale(c, c));
    }
    const double taus[] = {0.01, 0.05, 0.25, 0.5, 0.9};
    const double tau = taus[inst % 5];
    const double fast = MixtureQuantile(ConditionalMixture(w, comps, target, cond, at), tau);
    const double grid = oracle::GridConditionalQuantile(w, comps, target, cond, at, tau);
    err[inst] = std::abs(fast - grid);
  });
  const double worst = *std::max_element(err.begin(), err.end());
  return {worst <= 1e-4,
          Fmt("100 instances (50 single, 50 four-component; k<=4, d<=3): max |q - grid| = %.2e "
              "(tol 1e-4)",
              worst)};
}

// ---------------------------------------------------------------------------
// 5. Expected shortfall closed forms against quadrature and Monte Carlo.

UnivariateMixture EsMixture(double nu) {
  return {{0.5, 0.3, 0.2}, {{0.0, 1.0, nu}, {-1.0, 2.0, nu}, {0.5, 0.5, nu}}};
}

Outcome EsClosedForm() {
  const double nus[] = {2.5, 5.0, 15.6839, 100.0};
  const double taus[] = {0.01, 0.05, 0.5};
  const std::size_t draws = 10'000'000;
  struct Cell {
    double quad_err = 0.0;
    double z = 0.0;  // worst |closed - MC| / SE
  };
  std::vector<Cell> cells(8);
  ParallelFor(8, [&](std::size_t c) {
    const double nu = nus[c / 2];
    const bool mixture = c % 2 == 1;
    const UnivariateMixture mix =
        mixture ? EsMixture(nu) : UnivariateMixture{{1.0}, {{0.0, 1.0, nu}}};
    Rng rng(3000 + c);
    std::vector<double> x = testing::DrawMixture(mix, draws, rng);
    std::sort(x.begin(), x.end());
    for (double tau : taus) {
      const double closed =
          mixture ? MixtureExpectedShortfall(mix, tau) : TExpectedShortfall(tau, nu);
      const double quad = mixture ? testing::QuadMixtureExpectedShortfall(mix, tau)
                                  : testing::QuadTExpectedShortfall(tau, nu);
      cells[c].quad_err = std::max(cells[c].quad_err, std::abs(closed - quad));
      const double q = mixture ? MixtureQuantile(mix, tau) : TQuantile(tau, nu);
      const testing::TailEstimate mc =
          testing::EstimateTail(x, tau, mixture ? MixturePdf(mix, q) : TPdf(q, nu));
      cells[c].z = std::max(cells[c].z, std::abs(closed - mc.es) / mc.es_se);
    }
  });
  double quad = 0.0, z = 0.0;
  for (const Cell& cell : cells) {
    quad = std::max(quad, cell.quad_err);
    z = std::max(z, cell.z);
  }
  return {quad <= 1e-6 && z <= 3.0,
          Fmt("nu in {2.5,5,15.6839,100} x tau in {0.01,0.05,0.5}, t and 3-component mixture: "
              "max |ES - quadrature| = %.2e (tol 1e-6), max |ES - MC|/SE = %.2f over 1e7 draws "
              "(tol 3)",
              quad, z)};
}

// ---------------------------------------------------------------------------
// 6. Shapley axioms on random maps and on an attribution series.

// Sectors 0-2 form an equicorrelated block; sector 3 has its own block.
MsTModel BlockModel() {
  auto regime = [](double sd, double rho, double sd3, double nu) {
    MvtParams r;
    r.location = Eigen::Vector4d(0.001, 0.001, 0.001, 0.0005);
    r.scale = Eigen::Matrix4d::Zero();
    r.scale.topLeftCorner(3, 3).setConstant(rho * sd * sd);
    r.scale.diagonal().head(3).setConstant(sd * sd);
    r.scale(3, 3) = sd3 * sd3;
    r.dof = nu;
    return r;
  };
  MsTModel m;
  m.regimes = {regime(0.02, 0.4, 0.015, 8.0), regime(0.045, 0.75, 0.03, 4.5)};
  m.transition.resize(2, 2);
  m.transition << 0.96, 0.04, 0.08, 0.92;
  m.initial = Eigen::Vector2d(0.6, 0.4);
  return m;
}

Outcome ShapleyAxioms() {
  Rng rng(4000);
  std::normal_distribution<double> g;
  double eff = 0.0, sym = 0.0, dummy = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 3 + static_cast<std::size_t>(rep % 6);
    CharacteristicMap map;
    map.players.resize(n);
    std::iota(map.players.begin(), map.players.end(), 0);
    map.values.resize(std::size_t{1} << n);
    for (std::size_t s = 1; s < map.values.size(); ++s) map.values[s] = g(rng);
    // Players 0 and 1 exchangeable, player n-1 a dummy.
    const std::size_t b0 = 1, b1 = 2, bd = std::size_t{1} << (n - 1);
    for (std::size_t s = 0; s < map.values.size(); ++s) {
      if ((s & b0) && !(s & b1)) map.values[s] = map.values[(s & ~b0) | b1];
    }
    for (std::size_t s = 0; s < map.values.size(); ++s) {
      if (s & bd) map.values[s] = map.values[s & ~bd];
    }
    map.values[0] = 0.0;
    const ShapleyReport r = Shapley(map);
    eff = std::max(eff, std::abs(std::accumulate(r.shares.begin(), r.shares.end(), 0.0) -
                                 r.grand_value));
    sym = std::max(sym, std::abs(r.shares[0] - r.shares[1]));
    dummy = std::max(dummy, std::abs(r.shares[n - 1]));
  }
  const bool maps_ok = eff <= 1e-9 && sym <= 1e-9 && dummy <= 1e-8;

  const MsTModel m = BlockModel();
  const FitResult fit = WrapModel(m, SamplePath({m, 120, 41}).observations);
  double s_eff = 0.0, s_sym = 0.0, s_dummy = 0.0;
  for (Measure meas : {Measure::kCoVaR, Measure::kCoES}) {
    const AttributionSeries a = ComputeAttributionSeries(fit, meas, 0.05, 0.05);
    for (std::size_t t = 0; t < a.num_periods(); ++t) {
      for (std::size_t i = 0; i < 4; ++i) {
        const ShapleyReport& r = a.reports[i][t];
        s_eff = std::max(s_eff, std::abs(std::accumulate(r.shares.begin(), r.shares.end(), 0.0) -
                                         r.grand_value));
      }
      // Within the block, the other two members are exchangeable for each target.
      s_sym = std::max({s_sym, std::abs(a.Share(0, 1, t) - a.Share(0, 2, t)),
                        std::abs(a.Share(3, 0, t) - a.Share(3, 1, t)),
                        std::abs(a.Share(3, 1, t) - a.Share(3, 2, t))});
      s_dummy = std::max({s_dummy, std::abs(a.Share(0, 3, t)), std::abs(a.Share(3, 0, t))});
    }
  }
  const bool series_ok = s_eff <= 1e-9 && s_sym <= 1e-9 && s_dummy <= 1e-8;
  return {maps_ok && series_ok,
          Fmt("200 maps: efficiency %.1e, symmetry %.1e, dummy %.1e; p=4 block-diagonal series "
              "(T=120, both measures): efficiency %.1e, symmetry %.1e, dummy max |share| %.3e "
              "(tol 1e-9/1e-9/1e-8)",
              eff, sym, dummy, s_eff, s_sym, s_dummy)};
}

// ---------------------------------------------------------------------------
// 7. tau2 = 0.5 makes the distress and normal levels coincide.

Outcome NeutralLevel() {
  const MsTModel m = BlockModel();
  const FitResult fit = WrapModel(m, SamplePath({m, 30, 43}).observations);
  double worst = 0.0;
  for (const auto& s : TotalRiskSeries(fit, 0.05, 0.5)) {
    for (const auto& r : s.records) {
      worst = std::max({worst, std::abs(r.delta_covar), std::abs(r.delta_coes)});
    }
  }
  for (std::size_t t = 0; t < 30; ++t) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (Measure meas : {Measure::kCoVaR, Measure::kCoES}) {
        const CharacteristicMap map = CharacteristicValues(fit, t, i, meas, 0.05, 0.5);
        for (double v : map.values) worst = std::max(worst, std::abs(v));
        for (double s : Shapley(map).shares) worst = std::max(worst, std::abs(s));
      }
    }
  }
  return {worst <= 1e-10,
          Fmt("T=30, p=4, both measures: max |delta|, |v(S)|, |share| = %.1e (tol 1e-10)", worst)};
}

// ---------------------------------------------------------------------------
// 8. Standard pairwise delta against the Shapley share of the same pair.

struct PairGap {
  double max_gap = 0.0;
  std::size_t above = 0;  // dates with gap > 1e-5
  std::size_t dates = 0;
  double shared_weight_gap = 0.0;
};

// Pairwise delta from the bivariate marginal model (its own filtering on the
// pair's data) against the p-variate Shapley share, for (0,1) both ways.
PairGap ComparePair(const MsTModel& m, std::size_t periods, std::uint64_t seed) {
  const Eigen::MatrixXd y = SamplePath({m, periods, seed}).observations;
  const FitResult fit = WrapModel(m, y);
  MsTModel pair = m;
  const std::size_t keep[] = {0, 1};
  for (auto& r : pair.regimes) r = MarginalMvt(r, keep);
  const FitResult pair_fit = WrapModel(pair, y.leftCols(2));
  PairGap gap;
  std::vector<double> worst_at(periods, 0.0);
  for (Measure meas : {Measure::kCoVaR, Measure::kCoES}) {
    const AttributionSeries a = ComputeAttributionSeries(fit, meas, 0.05, 0.05);
    for (std::size_t dir = 0; dir < 2; ++dir) {
      const std::size_t target = dir, other = 1 - dir;
      const auto standard = StandardPairwiseDelta(pair_fit, target, other, meas, 0.05, 0.05);
      for (std::size_t t = 0; t < periods; ++t) {
        const double shapley = a.Share(target, other, t);
        worst_at[t] = std::max(worst_at[t], std::abs(standard[t] - shapley));
        // Same regime weights as the p-variate model: isolates the distributional part.
        PredictiveMixture shared = BuildPredictive(fit, t);
        for (auto& c : shared.components) c = MarginalMvt(c, keep);
        const RiskQuery q{target, {other}, 0.05, 0.05};
        const double d = meas == Measure::kCoVaR ? DeltaMultipleCoVaR(shared, q)
                                                 : DeltaMultipleCoES(shared, q);
        gap.shared_weight_gap = std::max(gap.shared_weight_gap, std::abs(d - shapley));
      }
    }
  }
  gap.dates = periods;
  for (double w : worst_at) {
    gap.max_gap = std::max(gap.max_gap, w);
    gap.above += w > 1e-5;
  }
  return gap;
}

MsTModel PairModel(bool block_diagonal) {
  auto regime = [&](double sd, double rho_in, double rho_out, double nu) {
    MvtParams r;
    r.location = Eigen::Vector4d(0.001, 0.0, -0.001, 0.0005);
    r.scale = Eigen::Matrix4d::Constant(block_diagonal ? 0.0 : rho_out * sd * sd);
    r.scale.topLeftCorner(2, 2).setConstant(rho_in * sd * sd);
    r.scale.bottomRightCorner(2, 2).setConstant(rho_in * sd * sd);
    r.scale.diagonal().setConstant(sd * sd);
    r.dof = nu;
    return r;
  };
  MsTModel m;
  m.regimes = {regime(0.02, 0.5, 0.3, 7.0), regime(0.04, 0.8, 0.6, 4.0)};
  m.transition.resize(2, 2);
  m.transition << 0.95, 0.05, 0.1, 0.9;
  m.initial = Eigen::Vector2d(0.5, 0.5);
  return m;
}

Outcome PairwiseCoincidence() {
  const PairGap block = ComparePair(PairModel(true), 150, 45);
  const PairGap corr = ComparePair(PairModel(false), 150, 46);
  const bool first = block.max_gap <= 1e-6;
  const bool second = 2 * corr.above > corr.dates;
  return {first && second,
          Fmt("block-diagonal model: max |standard - Shapley| = %.3e over %zu dates (tol 1e-6; "
              "%.3e with the p-variate regime weights) -> %s; correlated model: gap > 1e-5 at "
              "%zu/%zu dates -> %s",
              block.max_gap, block.dates, block.shared_weight_gap, first ? "ok" : "not met",
              corr.above, corr.dates, second ? "ok" : "not met")};
}

// Not a criterion: the gap above shrinks to zero as the model approaches a
// single Gaussian regime, where block-diagonal does mean independence.
std::string PairwiseDiagnostic() {
  std::string out;
  for (double nu : {4.0, 40.0, 4000.0}) {
    MsTModel m = PairModel(true);
    m.regimes.resize(1);
    m.regimes[0].dof = nu;
    m.transition = Eigen::MatrixXd::Ones(1, 1);
    m.initial = Eigen::VectorXd::Ones(1);
    out += Fmt(" L=1 nu=%g: %.2e;", nu, ComparePair(m, 5, 47).max_gap);
  }
  MsTModel m = PairModel(true);
  for (auto& r : m.regimes) r.dof = 4000.0;
  out += Fmt(" L=2 nu=4000: %.2e", ComparePair(m, 5, 47).max_gap);
  return out;
}

// ---------------------------------------------------------------------------
// 9. Translation and scaling equivariance of co-risk outputs.

PredictiveMixture Affine(const PredictiveMixture& mix, double scale, const Eigen::VectorXd& shift) {
  PredictiveMixture out = mix;
  for (auto& c : out.components) {
    c.location = scale * c.location + shift;
    c.scale *= scale * scale;
  }
  return out;
}

Outcome Equivariance() {
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    Rng rng(9000 + static_cast<std::uint64_t>(rep));
    const std::size_t p = 2 + static_cast<std::size_t>(rep % 3);
    const std::size_t L = 1 + static_cast<std::size_t>(rep % 3);
    const MsTModel m = testing::RandomModel(L, p, rng);
    const PredictiveMixture mix = BuildPredictive(m, m.initial);
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t target = order[0];
    const std::size_t d = 1 + rng() % (p - 1);
    std::vector<std::size_t> distress(order.begin() + 1, order.begin() + 1 + static_cast<long>(d));
    std::sort(distress.begin(), distress.end());
    const RiskQuery q{target, distress, 0.05, 0.05};

    std::uniform_real_distribution<double> u(-2.0, 2.0), s(0.2, 5.0);
    Eigen::VectorXd shift(static_cast<Eigen::Index>(p));
    for (Eigen::Index j = 0; j < shift.size(); ++j) shift(j) = u(rng);
    const double c = s(rng);
    const double a = shift(static_cast<Eigen::Index>(target));

    auto outputs = [&](const PredictiveMixture& x) {
      return std::vector<double>{MarginalVaR(x, target, 0.05), MarginalES(x, target, 0.05),
                                 MultipleCoVaR(x, q),          MultipleCoES(x, q),
                                 DeltaMultipleCoVaR(x, q),     DeltaMultipleCoES(x, q)};
    };
    const auto base = outputs(mix);
    const auto moved = outputs(Affine(mix, 1.0, shift));
    const auto scaled = outputs(Affine(mix, c, Eigen::VectorXd::Zero(shift.size())));
    for (std::size_t k = 0; k < 6; ++k) {
      const double expected_shift = k < 4 ? base[k] + a : base[k];
      worst = std::max({worst, std::abs(moved[k] - expected_shift),
                        std::abs(scaled[k] - c * base[k])});
    }
  }
  return {worst <= 1e-9,
          Fmt("50 random queries (p in 2..4, L in 1..3), six outputs: max deviation %.2e "
              "(tol 1e-9)",
              worst)};
}

std::set<int> ParseList(const std::string& text) {
  std::set<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

int Main(int argc, char** argv) {
  std::set<int> allowed, only;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if ((arg == "--allow-fail" || arg == "--only") && k + 1 < argc) {
      (arg == "--allow-fail" ? allowed : only) = ParseList(argv[++k]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--allow-fail 6,8] [--only 1,2]\n");
      return 2;
    }
  }
  const Criterion criteria[] = {
      {1, "AIC identity vs reference fits", 0.001, AicIdentity},
      {2, "forward/smoothing oracle", 10.0, ForwardOracle},
      {3, "EM recovery", 300.0, EmRecovery},
      {4, "conditional-t correctness", 60.0, ConditionalT},
      {5, "ES closed form", 120.0, EsClosedForm},
      {6, "Shapley axioms", 120.0, ShapleyAxioms},
      {7, "degenerate-level identities", 1.0, NeutralLevel},
      {8, "conditional-independence coincidence", 120.0, PairwiseCoincidence},
      {9, "equivariance suite", 30.0, Equivariance},
  };
  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    std::printf("%s  criterion %d (%s): %s; %.3f s (limit %g s)%s\n", pass ? "PASS" : "FAIL",
                c.id, c.name, o.detail.c_str(), secs, c.limit_seconds,
                !pass && allowed.count(c.id) ? " [known deviation]" : "");
    if (c.id == 8) std::printf("      diagnostic, max gap by model:%s\n", PairwiseDiagnostic().c_str());
    std::fflush(stdout);
    if (!pass && !allowed.count(c.id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}

}  // namespace
}  // namespace mscorisk::acceptance

int main(int argc, char** argv) { return mscorisk::acceptance::Main(argc, argv); }
