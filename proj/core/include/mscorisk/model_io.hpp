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

#ifndef MSCORISK_MODEL_IO_HPP_
#define MSCORISK_MODEL_IO_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "mscorisk/ms_model.hpp"

namespace mscorisk {

inline constexpr int kSchemaVersion = 1;

// A fitted (or ground-truth) model as stored on disk.
//
// JSON layout:
//   {"schema_version": 1, "L": .., "p": .., "labels": [series names],
//    "regimes": [{"mu": [..], "sigma": [row-major p*p], "nu": ..}],
//    "Q": [row-major L*L, rows = from-state], "delta": [..],
//    "loglik": .., "k": .., "T": ..}
// Doubles are written with round-trip precision.
struct ModelDocument {
  MsTModel model;
  std::vector<std::string> labels;
  double loglik = 0.0;
  std::size_t num_params = 0;
  std::size_t num_obs = 0;
};

std::string ModelToJson(const ModelDocument& doc);
ModelDocument ModelFromJson(const std::string& text);

void WriteModelFile(const std::string& path, const ModelDocument& doc);
ModelDocument ReadModelFile(const std::string& path);

}  // namespace mscorisk

#endif  // MSCORISK_MODEL_IO_HPP_
