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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mscorisk/error.hpp"

namespace mscorisk::cli {

namespace {

std::size_t ParseCount(const std::string& text) {
  std::size_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidArgument, "not a state count: '" + text + "'");
  }
  return value;
}

std::vector<Measure> ParseMeasures(const std::string& text) {
  if (text == "covar") return {Measure::kCoVaR};
  if (text == "coes") return {Measure::kCoES};
  if (text == "both") return {Measure::kCoVaR, Measure::kCoES};
  throw Error(ErrorCode::kInvalidArgument, "measure must be covar, coes or both");
}

StateProbabilities ParseProbs(const std::string& text) {
  if (text == "filtered") return StateProbabilities::kFiltered;
  if (text == "smoothed") return StateProbabilities::kSmoothed;
  throw Error(ErrorCode::kInvalidArgument, "probs must be filtered or smoothed");
}

Criterion ParseCriterion(const std::string& text) {
  if (text == "aic") return Criterion::kAic;
  if (text == "bic") return Criterion::kBic;
  throw Error(ErrorCode::kInvalidArgument, "criterion must be aic or bic");
}

CoesThreshold ParseThreshold(const std::string& text) {
  if (text == "conditional") return CoesThreshold::kConditionalQuantile;
  if (text == "unconditional") return CoesThreshold::kUnconditionalVaR;
  throw Error(ErrorCode::kInvalidArgument, "coes-threshold must be conditional or unconditional");
}

// Values from a JSON config file. Keys mirror the long flag names with '-'
// replaced by '_'.
void ApplyConfigFile(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config file must hold a JSON object");
  try {
    if (j.contains("input")) c.input = j["input"].get<std::string>();
    if (j.contains("prices")) c.prices = j["prices"].get<bool>();
    if (j.contains("L")) c.num_states = j["L"].get<std::size_t>();
    if (j.contains("L_range")) {
      const auto& r = j["L_range"];
      c.state_range = r.is_array() ? r.get<std::vector<std::size_t>>()
                                   : ParseStateRange(r.get<std::string>());
    }
    if (j.contains("restarts")) c.restarts = j["restarts"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tau1")) c.tau1 = j["tau1"].get<double>();
    if (j.contains("tau2")) c.tau2 = j["tau2"].get<double>();
    if (j.contains("horizon")) c.horizon = j["horizon"].get<int>();
    if (j.contains("measure")) c.measures = ParseMeasures(j["measure"].get<std::string>());
    if (j.contains("probs")) c.probs = ParseProbs(j["probs"].get<std::string>());
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("compare_standard")) c.compare_standard = j["compare_standard"].get<bool>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("model")) c.model = j["model"].get<std::string>();
    if (j.contains("periods")) c.periods = j["periods"].get<std::size_t>();
    if (j.contains("criterion")) c.criterion = ParseCriterion(j["criterion"].get<std::string>());
    if (j.contains("coes_threshold")) {
      c.coes_threshold = ParseThreshold(j["coes_threshold"].get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "config file " + path + ": " + e.what());
  }
}

}  // namespace

std::vector<std::size_t> ParseStateRange(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string sep : {"..", "-", ":"}) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos) continue;
    const std::size_t lo = ParseCount(text.substr(0, pos));
    const std::size_t hi = ParseCount(text.substr(pos + sep.size()));
    if (lo > hi) throw Error(ErrorCode::kInvalidArgument, "empty state range " + text);
    for (std::size_t l = lo; l <= hi; ++l) out.push_back(l);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseCount(item));
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty state range");
  return out;
}

void RunConfig::Validate() const {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!(tau1 > 0.0 && tau1 < 1.0)) fail("tau1 must lie in (0, 1)");
  if (!(tau2 > 0.0 && tau2 < 1.0)) fail("tau2 must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (horizon < 1) fail("horizon must be at least 1");
  if (restarts < 1) fail("restarts must be at least 1");
  if (num_states && *num_states < 1) fail("L must be at least 1");
  for (auto l : state_range) {
    if (l < 1) fail("every L in the range must be at least 1");
  }
  if (command == Command::kSimulate && periods < 1) fail("periods must be at least 1");
  if (command != Command::kSimulate && input.empty()) fail("--input is required");
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regime-switching multivariate Student-t co-risk toolkit", "mscorisk"};
  app.require_subcommand(1);

  std::string config_path, input, l_range, measure, probs, out_dir, model, criterion,
      threshold;
  std::size_t num_states = 0, restarts = 0, periods = 0;
  std::uint64_t seed = 0;
  double tau1 = 0, tau2 = 0, alpha = 0;
  int horizon = 0;
  bool prices = false, compare = false;

  auto* o_config = app.add_option("--config", config_path, "JSON file of settings; flags win");
  auto* o_input = (app.add_option("--input", input, "CSV of returns (or prices with --prices)"));
  auto* o_prices = (app.add_flag("--prices", prices, "input holds prices"));
  auto* o_l = (app.add_option("--L", num_states, "number of hidden states"));
  auto* o_range = (app.add_option("--L-range", l_range, "state counts, e.g. 2..6"));
  auto* o_restarts = (app.add_option("--restarts", restarts, "EM restarts per state count"));
  auto* o_seed = (app.add_option("--seed", seed, "base seed"));
  auto* o_tau1 = (app.add_option("--tau1", tau1, "target tail level"));
  auto* o_tau2 = (app.add_option("--tau2", tau2, "distress level of the conditioners"));
  auto* o_h = (app.add_option("--horizon", horizon, "forecast horizon in periods"));
  auto* o_measure = (app.add_option("--measure", measure, "covar, coes or both"));
  auto* o_probs = (app.add_option("--probs", probs, "filtered or smoothed"));
  auto* o_out = (app.add_option("--out", out_dir, "output directory"));
  auto* o_compare =
      (app.add_flag("--compare-standard", compare, "also fit each pair and emit its delta"));
  auto* o_alpha = (app.add_option("--alpha", alpha, "empirical quantile level for stats"));
  auto* o_model = (app.add_option("--model", model, "model JSON to use instead of fitting"));
  auto* o_periods = (app.add_option("--periods", periods, "length of a simulated panel"));
  auto* o_crit = (app.add_option("--criterion", criterion, "aic or bic"));
  auto* o_thr = (app.add_option("--coes-threshold", threshold, "conditional or unconditional"));

  const std::pair<const char*, Command> commands[] = {
      {"stats", Command::kStats},     {"select", Command::kSelect},
      {"fit", Command::kFit},         {"risk", Command::kRisk},
      {"shapley", Command::kShapley}, {"simulate", Command::kSimulate}};
  const char* help[] = {"summary statistics per series",
                        "information criteria over a range of state counts",
                        "fit a model and write it with its state probabilities",
                        "total-risk CoVaR and CoES series",
                        "Shapley attribution of delta co-risk",
                        "simulate a panel from a model"};
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    subs.push_back(app.add_subcommand(commands[k].first, help[k])->fallthrough());
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  RunConfig c;
  try {
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (subs[k]->parsed()) c.command = commands[k].second;
    }
    if (o_config->count() > 0) ApplyConfigFile(config_path, c);
    if (o_input->count()) c.input = input;
    if (o_prices->count()) c.prices = prices;
    if (o_l->count()) c.num_states = num_states;
    if (o_range->count()) c.state_range = ParseStateRange(l_range);
    if (o_restarts->count()) c.restarts = restarts;
    if (o_seed->count()) c.seed = seed;
    if (o_tau1->count()) c.tau1 = tau1;
    if (o_tau2->count()) c.tau2 = tau2;
    if (o_h->count()) c.horizon = horizon;
    if (o_measure->count()) c.measures = ParseMeasures(measure);
    if (o_probs->count()) c.probs = ParseProbs(probs);
    if (o_out->count()) c.out = out_dir;
    if (o_compare->count()) c.compare_standard = compare;
    if (o_alpha->count()) c.alpha = alpha;
    if (o_model->count()) c.model = model;
    if (o_periods->count()) c.periods = periods;
    if (o_crit->count()) c.criterion = ParseCriterion(criterion);
    if (o_thr->count()) c.coes_threshold = ParseThreshold(threshold);
    c.Validate();
  } catch (const Error& e) {
    err << "mscorisk: " << e.what() << '\n';
    return 1;
  }

  try {
    std::filesystem::create_directories(c.out);
    switch (c.command) {
      case Command::kStats: return RunStats(c, err);
      case Command::kSelect: return RunSelect(c, err);
      case Command::kFit: return RunFit(c, err);
      case Command::kRisk: return RunRisk(c, err);
      case Command::kShapley: return RunShapley(c, err);
      case Command::kSimulate: return RunSimulate(c, err);
    }
  } catch (const Error& e) {
    err << "mscorisk: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "mscorisk: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace mscorisk::cli
