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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mscorisk/attribution.hpp"
#include "mscorisk/error.hpp"
#include "mscorisk/model_io.hpp"
#include "mscorisk/panel.hpp"
#include "mscorisk/simulate.hpp"

namespace mscorisk::cli {

namespace {

constexpr int kValidationFailed = 3;

void SchemaLine(std::ostream& out) { out << "# mscorisk schema_version=" << kSchemaVersion << '\n'; }

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void CloseOutput(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::string Quote(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + '"';
}

ReturnPanel LoadInput(const RunConfig& c) {
  return c.prices ? LoadPriceCsv(c.input) : LoadCsv(c.input);
}

const char* MeasureSlug(Measure m) { return m == Measure::kCoVaR ? "covar" : "coes"; }

// Fits per --L, or selects per --L-range, unless --model names a file.
FitResult ObtainFit(const RunConfig& c, const ReturnPanel& panel, std::ostream& log,
                    bool& fitted_here) {
  fitted_here = false;
  if (!c.model.empty()) {
    const ModelDocument doc = ReadModelFile(c.model);
    if (doc.model.dim() != panel.num_series()) {
      throw Error(ErrorCode::kDimensionMismatch, "model dimension does not match the panel");
    }
    if (!doc.labels.empty() && doc.labels != panel.names()) {
      throw Error(ErrorCode::kDimensionMismatch, "model labels do not match the panel columns");
    }
    return WrapModel(doc.model, panel.returns());
  }
  fitted_here = true;
  if (c.num_states) {
    log << "fitting L=" << *c.num_states << " with " << c.restarts << " restarts\n";
    return FitWithRestarts(panel.returns(), *c.num_states, c.restarts, c.seed);
  }
  if (!c.state_range.empty()) {
    SelectionTable table =
        SelectNumStates(panel.returns(), c.state_range, c.restarts, c.seed, c.criterion);
    for (auto& row : table.rows) {
      if (row.num_states == table.chosen && row.fit) {
        log << "selected L=" << table.chosen << '\n';
        return std::move(*row.fit);
      }
    }
    throw Error(ErrorCode::kFitFailed, "no state count in the range could be fitted");
  }
  throw Error(ErrorCode::kInvalidArgument, "one of --L, --L-range or --model is required");
}

ModelDocument Document(const FitResult& fit, const ReturnPanel& panel) {
  ModelDocument doc;
  doc.model = fit.model;
  doc.labels = panel.names();
  doc.loglik = fit.loglik;
  doc.num_params = ParameterCount(fit.model.num_states(), fit.model.dim());
  doc.num_obs = panel.num_periods();
  return doc;
}

// Writes the model and reads it back.
bool WriteAndCheckModel(const std::filesystem::path& path, const ModelDocument& doc,
                        std::ostream& log) {
  WriteModelFile(path.string(), doc);
  const ModelDocument back = ReadModelFile(path.string());
  if (ModelToJson(back) != ModelToJson(doc)) {
    log << "model file " << path << " does not round-trip\n";
    return false;
  }
  return true;
}

bool WriteProbabilities(const std::filesystem::path& path, const Eigen::MatrixXd& probs,
                        const ReturnPanel& panel, std::ostream& log) {
  std::ofstream out = OpenOutput(path);
  SchemaLine(out);
  out << "date";
  for (Eigen::Index l = 0; l < probs.cols(); ++l) out << ",state_" << l + 1;
  out << '\n';
  bool ok = true;
  for (Eigen::Index t = 0; t < probs.rows(); ++t) {
    out << FormatIsoDate(panel.dates()[static_cast<std::size_t>(t)]);
    for (Eigen::Index l = 0; l < probs.cols(); ++l) out << ',' << FormatNumber(probs(t, l));
    out << '\n';
    if (std::abs(probs.row(t).sum() - 1.0) > 1e-10) ok = false;
  }
  CloseOutput(out, path);
  if (!ok) log << path << ": a row does not sum to one\n";
  return ok;
}

}  // namespace

MsTModel DemoModel() {
  const auto regime = [](double mu, double sd, double rho, double nu) {
    MvtParams r;
    r.location = Eigen::VectorXd::Constant(4, mu);
    r.scale = Eigen::MatrixXd::Constant(4, 4, rho * sd * sd);
    r.scale.diagonal().setConstant(sd * sd);
    r.dof = nu;
    return r;
  };
  MsTModel m;
  m.regimes = {regime(0.003, 0.02, 0.5, 8.0), regime(-0.004, 0.045, 0.8, 5.0)};
  // One pair more tightly linked than the rest in the calm regime.
  m.regimes[0].scale(0, 1) = m.regimes[0].scale(1, 0) = 0.8 * 0.02 * 0.02;
  m.transition.resize(2, 2);
  m.transition << 0.97, 0.03, 0.08, 0.92;
  m.initial.resize(2);
  m.initial << 0.7, 0.3;
  return m;
}

int RunStats(const RunConfig& c, std::ostream& log) {
  const ReturnPanel panel = LoadInput(c);
  const auto stats = ComputeSummaryStats(panel, c.alpha);
  const auto path = c.out / "stats.csv";
  std::ofstream out = OpenOutput(path);
  SchemaLine(out);
  out << "series,min,max,mean,std_dev,skewness,kurtosis,alpha,quantile,jarque_bera\n";
  bool ok = true;
  for (const auto& s : stats) {
    out << s.name;
    for (double v : {s.min, s.max, s.mean, s.std_dev, s.skewness, s.kurtosis, s.alpha, s.quantile,
                     s.jarque_bera}) {
      out << ',' << FormatNumber(v);
    }
    out << '\n';
    ok = ok && s.min <= s.mean && s.mean <= s.max && s.std_dev > 0.0 && s.jarque_bera >= 0.0;
  }
  CloseOutput(out, path);
  log << "wrote " << path.string() << " (" << stats.size() << " series, T="
      << panel.num_periods() << ")\n";
  return ok ? 0 : kValidationFailed;
}

int RunSelect(const RunConfig& c, std::ostream& log) {
  const ReturnPanel panel = LoadInput(c);
  std::vector<std::size_t> range = c.state_range;
  if (range.empty() && c.num_states) range = {*c.num_states};
  if (range.empty()) throw Error(ErrorCode::kInvalidArgument, "--L-range or --L is required");
  const SelectionTable table =
      SelectNumStates(panel.returns(), range, c.restarts, c.seed, c.criterion);
  const auto path = c.out / "selection.csv";
  std::ofstream out = OpenOutput(path);
  SchemaLine(out);
  out << "L,status,loglik,k,aic,bic,chosen,error\n";
  bool ok = false;
  for (const auto& row : table.rows) {
    out << row.num_states << ',' << (row.ok ? "ok" : "failed") << ',';
    if (row.ok) {
      out << FormatNumber(row.loglik) << ',' << row.num_params << ',' << FormatNumber(row.aic) << ','
          << FormatNumber(row.bic);
    } else {
      out << ",,,";
    }
    const bool chosen = row.ok && row.num_states == table.chosen;
    ok = ok || chosen;
    out << ',' << (chosen ? 1 : 0) << ',' << (row.ok ? "" : Quote(row.error)) << '\n';
    log << "L=" << row.num_states << (row.ok ? "" : " failed: " + row.error) << '\n';
  }
  CloseOutput(out, path);
  if (ok) log << "chosen L=" << table.chosen << '\n';
  return ok ? 0 : 2;
}

int RunFit(const RunConfig& c, std::ostream& log) {
  const ReturnPanel panel = LoadInput(c);
  bool fitted = false;
  const FitResult fit = ObtainFit(c, panel, log, fitted);
  log << "loglik " << fit.loglik << ", " << fit.iterations << " iterations"
      << (fit.converged ? "" : " (not converged)") << '\n';
  bool ok = WriteAndCheckModel(c.out / "model.json", Document(fit, panel), log);
  ok = WriteProbabilities(c.out / "smoothed.csv", fit.smoothed, panel, log) && ok;
  ok = WriteProbabilities(c.out / "filtered.csv", fit.filtered, panel, log) && ok;
  if (!fit.monotone) log << "warning: log-likelihood decreased during EM\n";
  return ok ? 0 : kValidationFailed;
}

int RunRisk(const RunConfig& c, std::ostream& log) {
  const ReturnPanel panel = LoadInput(c);
  bool fitted = false;
  const FitResult fit = ObtainFit(c, panel, log, fitted);
  bool ok = true;
  if (fitted) ok = WriteAndCheckModel(c.out / "model.json", Document(fit, panel), log);
  SeriesOptions options;
  options.horizon = c.horizon;
  options.probs = c.probs;
  options.co_risk.coes_threshold = c.coes_threshold;
  const auto series = TotalRiskSeries(fit, c.tau1, c.tau2, options);
  for (const auto& s : series) {
    for (const auto& r : s.records) {
      for (double v : {r.var, r.es, r.covar, r.coes, r.delta_covar, r.delta_coes}) {
        ok = ok && std::isfinite(v);
      }
    }
  }
  const auto path = c.out / "risk.csv";
  std::ofstream out = OpenOutput(path);
  WriteRiskSeriesCsv(out, series, panel.dates(), panel.names(), c.measures);
  CloseOutput(out, path);
  log << "wrote " << path.string() << '\n';
  if (!ok) log << "non-finite risk values\n";
  return ok ? 0 : kValidationFailed;
}

int RunShapley(const RunConfig& c, std::ostream& log) {
  const ReturnPanel panel = LoadInput(c);
  bool fitted = false;
  const FitResult fit = ObtainFit(c, panel, log, fitted);
  bool ok = true;
  if (fitted) ok = WriteAndCheckModel(c.out / "model.json", Document(fit, panel), log);
  SeriesOptions options;
  options.horizon = c.horizon;
  options.probs = c.probs;
  options.co_risk.coes_threshold = c.coes_threshold;
  const std::size_t p = panel.num_series();

  std::vector<AttributionSeries> attributions;
  for (Measure m : c.measures) {
    AttributionSeries series = ComputeAttributionSeries(fit, m, c.tau1, c.tau2, options);
    for (const auto& per_target : series.reports) {
      for (const auto& r : per_target) {
        double sum = 0.0;
        for (double s : r.shares) sum += s;
        if (!(std::abs(sum - r.grand_value) <= 1e-9)) ok = false;
      }
    }
    const std::string stem = std::string("attribution_") + MeasureSlug(m);
    auto csv_path = c.out / (stem + ".csv");
    std::ofstream csv = OpenOutput(csv_path);
    WriteAttributionCsv(csv, series, panel.dates(), panel.names());
    CloseOutput(csv, csv_path);
    auto json_path = c.out / (stem + ".json");
    std::ofstream json = OpenOutput(json_path);
    json << AttributionToJson(series, panel.dates(), panel.names()) << '\n';
    CloseOutput(json, json_path);
    log << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
    attributions.push_back(std::move(series));
  }
  if (!ok) log << "shares do not add up to the grand value\n";

  if (c.compare_standard) {
    // Bivariate fits, one per unordered pair, with the same number of states.
    struct PairFit {
      std::size_t a, b;
      FitResult fit;
    };
    std::vector<PairFit> pairs;
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a + 1; b < p; ++b) {
        const std::size_t cols[] = {a, b};
        const ReturnPanel sub = panel.SelectColumns(cols);
        log << "fitting pair " << panel.names()[a] << '+' << panel.names()[b] << '\n';
        pairs.push_back(
            {a, b, FitWithRestarts(sub.returns(), fit.model.num_states(), c.restarts, c.seed)});
      }
    }
    for (std::size_t k = 0; k < c.measures.size(); ++k) {
      const Measure m = c.measures[k];
      const auto path = c.out / (std::string("standard_") + MeasureSlug(m) + ".csv");
      std::ofstream out = OpenOutput(path);
      SchemaLine(out);
      out << "date,target,contributor,measure,standard_delta,shapley_share\n";
      const std::string name = std::string("Delta") + MeasureName(m);
      for (const auto& pf : pairs) {
        for (int dir = 0; dir < 2; ++dir) {
          const std::size_t target = dir == 0 ? pf.a : pf.b;
          const std::size_t other = dir == 0 ? pf.b : pf.a;
          const auto standard = StandardPairwiseDelta(pf.fit, dir == 0 ? 0 : 1,
                                                      dir == 0 ? 1 : 0, m, c.tau1, c.tau2,
                                                      options);
          for (std::size_t t = 0; t < standard.size(); ++t) {
            out << FormatIsoDate(panel.dates()[t]) << ',' << panel.names()[target] << ','
                << panel.names()[other] << ',' << name << ',' << FormatNumber(standard[t]) << ','
                << FormatNumber(attributions[k].Share(target, other, t)) << '\n';
          }
        }
      }
      CloseOutput(out, path);
      log << "wrote " << path.string() << '\n';
    }
  }
  return ok ? 0 : kValidationFailed;
}

int RunSimulate(const RunConfig& c, std::ostream& log) {
  ModelDocument truth;
  if (!c.model.empty()) {
    truth = ReadModelFile(c.model);
  } else {
    truth.model = DemoModel();
  }
  if (truth.labels.empty()) {
    for (std::size_t j = 0; j < truth.model.dim(); ++j) {
      truth.labels.push_back("series_" + std::to_string(j + 1));
    }
  }
  const SimulatedPath path = SamplePath({truth.model, c.periods, c.seed});
  const ReturnPanel panel =
      PathToPanel(path, truth.labels, std::chrono::year{2000} / 1 / 7);
  truth.loglik = ForwardLogLik(truth.model, panel.returns());
  truth.num_params = ParameterCount(truth.model.num_states(), truth.model.dim());
  truth.num_obs = panel.num_periods();

  const auto panel_path = c.out / "panel.csv";
  std::ofstream out = OpenOutput(panel_path);
  SchemaLine(out);
  WritePanelCsv(out, panel);
  CloseOutput(out, panel_path);

  const auto states_path = c.out / "states.csv";
  std::ofstream states = OpenOutput(states_path);
  SchemaLine(states);
  states << "date,state\n";
  for (std::size_t t = 0; t < path.states.size(); ++t) {
    states << FormatIsoDate(panel.dates()[t]) << ',' << path.states[t] + 1 << '\n';
  }
  CloseOutput(states, states_path);

  bool ok = WriteAndCheckModel(c.out / "truth.json", truth, log);
  const ReturnPanel back = LoadCsv(panel_path.string());
  ok = ok && back.returns() == panel.returns();
  log << "wrote " << panel_path.string() << " (T=" << panel.num_periods() << ", p="
      << panel.num_series() << ")\n";
  return ok ? 0 : kValidationFailed;
}

}  // namespace mscorisk::cli
