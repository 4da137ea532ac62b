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

#ifndef MSCORISK_SIMULATE_HPP_
#define MSCORISK_SIMULATE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mscorisk/ms_model.hpp"
#include "mscorisk/panel.hpp"

namespace mscorisk {

struct SimSpec {
  MsTModel model;
  std::size_t num_periods = 0;
  std::uint64_t seed = 0;
};

struct SimulatedPath {
  std::vector<std::size_t> states;
  Eigen::MatrixXd observations;  // T x p
};

// States from the chain; observations as mu + L z / sqrt(w) with z standard
// normal and w ~ Gamma(nu/2, rate nu/2). Every period draws from its own
// generator keyed by (seed, t), so output does not depend on thread count.
SimulatedPath SamplePath(const SimSpec& spec);

// Consecutive dates seven days apart.
std::vector<Date> WeeklyDates(const Date& start, std::size_t count);

ReturnPanel PathToPanel(const SimulatedPath& path, std::vector<std::string> names,
                        const Date& start);

}  // namespace mscorisk

#endif  // MSCORISK_SIMULATE_HPP_
