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

#include "mscorisk/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mscorisk/error.hpp"

namespace mscorisk {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> RowMajor(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

Eigen::MatrixXd FromRowMajor(const std::vector<double>& v, std::size_t n) {
  if (v.size() != n * n) {
    throw Error(ErrorCode::kParse, "matrix has " + std::to_string(v.size()) +
                                       " entries, expected " + std::to_string(n * n));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r * n + c];
    }
  }
  return m;
}

Eigen::VectorXd ToVector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> FromVector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

std::string ModelToJson(const ModelDocument& doc) {
  const MsTModel& m = doc.model;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["L"] = m.num_states();
  j["p"] = m.dim();
  j["labels"] = doc.labels;
  json regimes = json::array();
  for (const auto& r : m.regimes) {
    regimes.push_back({{"mu", FromVector(r.location)}, {"sigma", RowMajor(r.scale)},
                       {"nu", r.dof}});
  }
  j["regimes"] = std::move(regimes);
  j["Q"] = RowMajor(m.transition);
  j["delta"] = FromVector(m.initial);
  j["loglik"] = doc.loglik;
  j["k"] = doc.num_params;
  j["T"] = doc.num_obs;
  return j.dump(2);
}

ModelDocument ModelFromJson(const std::string& text) {
  ModelDocument doc;
  try {
    const json j = json::parse(text);
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw Error(ErrorCode::kParse, "unsupported schema_version " + std::to_string(version));
    }
    const auto L = j.at("L").get<std::size_t>();
    const auto p = j.at("p").get<std::size_t>();
    doc.labels = j.value("labels", std::vector<std::string>{});
    const auto& regimes = j.at("regimes");
    if (regimes.size() != L) throw Error(ErrorCode::kParse, "regime count does not match L");
    for (const auto& r : regimes) {
      MvtParams params;
      params.location = ToVector(r.at("mu").get<std::vector<double>>());
      if (static_cast<std::size_t>(params.location.size()) != p) {
        throw Error(ErrorCode::kParse, "mu length does not match p");
      }
      params.scale = FromRowMajor(r.at("sigma").get<std::vector<double>>(), p);
      params.dof = r.at("nu").get<double>();
      doc.model.regimes.push_back(std::move(params));
    }
    doc.model.transition = FromRowMajor(j.at("Q").get<std::vector<double>>(), L);
    doc.model.initial = ToVector(j.at("delta").get<std::vector<double>>());
    doc.loglik = j.value("loglik", 0.0);
    doc.num_params = j.value("k", std::size_t{0});
    doc.num_obs = j.value("T", std::size_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model JSON: ") + e.what());
  }
  doc.model.Validate();
  return doc;
}

void WriteModelFile(const std::string& path, const ModelDocument& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << ModelToJson(doc) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path);
}

ModelDocument ReadModelFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ModelFromJson(ss.str());
}

}  // namespace mscorisk
