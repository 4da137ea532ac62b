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

#ifndef MSCORISK_TOOLS_CLI_HPP_
#define MSCORISK_TOOLS_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mscorisk/co_risk.hpp"
#include "mscorisk/ms_model.hpp"
#include "mscorisk/predictive.hpp"

namespace mscorisk::cli {

enum class Command { kStats, kSelect, kFit, kRisk, kShapley, kSimulate };

struct RunConfig {
  Command command = Command::kStats;
  std::string input;
  bool prices = false;
  std::optional<std::size_t> num_states;     // --L
  std::vector<std::size_t> state_range;      // --L-range
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  double tau1 = 0.05;
  double tau2 = 0.05;
  int horizon = 1;
  std::vector<Measure> measures = {Measure::kCoVaR, Measure::kCoES};
  StateProbabilities probs = StateProbabilities::kFiltered;
  std::filesystem::path out = ".";
  bool compare_standard = false;
  double alpha = 0.01;
  std::string model;  // fitted or ground-truth model JSON
  std::size_t periods = 1000;
  Criterion criterion = Criterion::kAic;
  CoesThreshold coes_threshold = CoesThreshold::kConditionalQuantile;

  // Throws kInvalidArgument when a value is out of range.
  void Validate() const;
};

// "2..6", "2-6", "2:6" or "2,3,5".
std::vector<std::size_t> ParseStateRange(const std::string& text);

// Entry point shared by the executable and the tests. Exit codes: 0 success,
// 1 usage error, 2 input or numerical failure, 3 an output failed validation.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Implemented in commands.cpp. Each returns the exit code.
int RunStats(const RunConfig& config, std::ostream& log);
int RunSelect(const RunConfig& config, std::ostream& log);
int RunFit(const RunConfig& config, std::ostream& log);
int RunRisk(const RunConfig& config, std::ostream& log);
int RunShapley(const RunConfig& config, std::ostream& log);
int RunSimulate(const RunConfig& config, std::ostream& log);

// Two-regime, four-series model used by `simulate` when no --model is given.
MsTModel DemoModel();

}  // namespace mscorisk::cli

#endif  // MSCORISK_TOOLS_CLI_HPP_
