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

#include "mscorisk/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "mscorisk/error.hpp"

namespace mscorisk {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::optional<double> ParseDouble(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> ParseInt(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

void ValidateDates(const std::vector<Date>& dates) {
  for (std::size_t t = 1; t < dates.size(); ++t) {
    if (dates[t] == dates[t - 1]) {
      throw Error(ErrorCode::kDuplicateDate,
                  "duplicate date " + FormatIsoDate(dates[t]));
    }
    if (dates[t] < dates[t - 1]) {
      throw Error(ErrorCode::kNonMonotoneDates,
                  "dates not increasing at " + FormatIsoDate(dates[t]));
    }
  }
}

}  // namespace

std::optional<Date> ParseIsoDate(std::string_view text) {
  text = Trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  const auto y = ParseInt(text.substr(0, 4));
  const auto m = ParseInt(text.substr(5, 2));
  const auto d = ParseInt(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string FormatIsoDate(const Date& date) {
  std::ostringstream os;
  os << std::setfill('0') << std::setw(4) << static_cast<int>(date.year()) << '-'
     << std::setw(2) << static_cast<unsigned>(date.month()) << '-' << std::setw(2)
     << static_cast<unsigned>(date.day());
  return os.str();
}

ReturnPanel::ReturnPanel(std::vector<Date> dates, std::vector<std::string> names,
                         Eigen::MatrixXd returns)
    : dates_(std::move(dates)), names_(std::move(names)), returns_(std::move(returns)) {
  if (returns_.cols() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a return panel needs at least 2 series");
  }
  if (static_cast<std::size_t>(returns_.rows()) != dates_.size() ||
      static_cast<std::size_t>(returns_.cols()) != names_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "return panel shape does not match dates/names");
  }
  if (!returns_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "return panel has non-finite cells");
  }
  ValidateDates(dates_);
}

ReturnPanel::ReturnPanel(DatedTable table)
    : ReturnPanel(std::move(table.dates), std::move(table.names), std::move(table.values)) {}

ReturnPanel ReturnPanel::SelectColumns(std::span<const std::size_t> columns) const {
  Eigen::MatrixXd sub(returns_.rows(), static_cast<Eigen::Index>(columns.size()));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] >= num_series()) {
      throw Error(ErrorCode::kInvalidArgument, "column index out of range");
    }
    sub.col(static_cast<Eigen::Index>(c)) = returns_.col(static_cast<Eigen::Index>(columns[c]));
    names.push_back(names_[columns[c]]);
  }
  return ReturnPanel(dates_, std::move(names), std::move(sub));
}

DatedTable ReadCsv(std::istream& in, const CsvLayout& layout) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (Trim(line).empty() || line.starts_with('#')) continue;
    header_line = line;
    header = SplitCommas(header_line);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::kParse, "CSV has no header row");

  auto find_column = [&](const std::string& name) -> std::size_t {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    throw Error(ErrorCode::kParse, "CSV has no column named '" + name + "'");
  };
  const std::size_t date_col =
      layout.date_column.empty() ? 0 : find_column(layout.date_column);
  std::vector<std::size_t> value_cols;
  if (layout.value_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != date_col) value_cols.push_back(c);
    }
  } else {
    for (const auto& name : layout.value_columns) value_cols.push_back(find_column(name));
  }
  if (value_cols.empty()) throw Error(ErrorCode::kParse, "CSV has no value columns");

  DatedTable table;
  for (auto c : value_cols) table.names.emplace_back(header[c]);

  std::vector<double> cells;
  std::vector<std::size_t> bad_rows;
  std::size_t ragged_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty() || line.starts_with('#')) continue;
    const auto fields = SplitCommas(line);
    if (fields.size() != header.size()) {
      ragged_line = line_no;
      break;
    }
    const auto date = ParseIsoDate(fields[date_col]);
    bool ok = date.has_value();
    std::vector<double> row;
    for (auto c : value_cols) {
      const auto v = ParseDouble(fields[c]);
      ok = ok && v.has_value();
      row.push_back(v.value_or(0.0));
    }
    if (!ok) {
      bad_rows.push_back(line_no);
      continue;
    }
    table.dates.push_back(*date);
    cells.insert(cells.end(), row.begin(), row.end());
  }
  if (ragged_line != 0) {
    throw Error(ErrorCode::kRaggedRow,
                "line " + std::to_string(ragged_line) + " has " +
                    "a different number of fields than the header");
  }
  if (!bad_rows.empty()) {
    std::string msg = "unparseable cells on line(s)";
    for (auto r : bad_rows) msg += " " + std::to_string(r);
    throw Error(ErrorCode::kParse, msg);
  }
  if (table.dates.empty()) throw Error(ErrorCode::kParse, "CSV has no data rows");
  ValidateDates(table.dates);

  const auto rows = static_cast<Eigen::Index>(table.dates.size());
  const auto cols = static_cast<Eigen::Index>(value_cols.size());
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                Eigen::RowMajor>>(cells.data(), rows, cols);
  return table;
}

DatedTable ReadCsv(const std::string& path, const CsvLayout& layout) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return ReadCsv(in, layout);
}

ReturnPanel LoadCsv(const std::string& path, const CsvLayout& layout) {
  return ReturnPanel(ReadCsv(path, layout));
}

ReturnPanel LoadPriceCsv(const std::string& path, const CsvLayout& layout) {
  return PricesToLogReturns(ReadCsv(path, layout));
}

Eigen::MatrixXd PricesToLogReturns(const Eigen::MatrixXd& prices) {
  if (prices.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two price rows");
  }
  for (Eigen::Index t = 0; t < prices.rows(); ++t) {
    for (Eigen::Index j = 0; j < prices.cols(); ++j) {
      if (!(prices(t, j) > 0.0)) {
        throw Error(ErrorCode::kNonPositivePrice,
                    "non-positive price at row " + std::to_string(t + 1) + ", column " +
                        std::to_string(j + 1));
      }
    }
  }
  const Eigen::MatrixXd logp = prices.array().log().matrix();
  return logp.bottomRows(prices.rows() - 1) - logp.topRows(prices.rows() - 1);
}

ReturnPanel PricesToLogReturns(const DatedTable& prices) {
  Eigen::MatrixXd returns = PricesToLogReturns(prices.values);
  std::vector<Date> dates(prices.dates.begin() + 1, prices.dates.end());
  return ReturnPanel(std::move(dates), prices.names, std::move(returns));
}

std::string FormatNumber(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void WritePanelCsv(std::ostream& out, const ReturnPanel& panel) {
  out << "date";
  for (const auto& n : panel.names()) out << ',' << n;
  out << '\n';
  for (std::size_t t = 0; t < panel.num_periods(); ++t) {
    out << FormatIsoDate(panel.dates()[t]);
    for (std::size_t j = 0; j < panel.num_series(); ++j) {
      out << ',' << FormatNumber(panel.returns()(static_cast<Eigen::Index>(t),
                                                static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

double EmpiricalQuantile(std::span<const double> values, double alpha) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "quantile of empty series");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "quantile level outside [0, 1]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = alpha * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SummaryStats ComputeSummaryStats(std::span<const double> series, double alpha,
                                 std::string name) {
  if (series.size() < 8) {
    throw Error(ErrorCode::kInvalidArgument, "summary statistics need T >= 8");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tail level must lie in (0, 1)");
  }
  const double n = static_cast<double>(series.size());
  SummaryStats s;
  s.name = std::move(name);
  s.alpha = alpha;
  s.min = *std::min_element(series.begin(), series.end());
  s.max = *std::max_element(series.begin(), series.end());
  double sum = 0.0;
  for (double x : series) sum += x;
  s.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : series) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0) || s.max == s.min) {
    throw Error(ErrorCode::kDegenerateSeries,
                "series '" + s.name + "' has zero variance");
  }
  s.std_dev = std::sqrt(m2 * n / (n - 1.0));
  s.skewness = m3 / std::pow(m2, 1.5);
  s.kurtosis = m4 / (m2 * m2);
  const double excess = s.kurtosis - 3.0;
  s.jarque_bera = n / 6.0 * (s.skewness * s.skewness + excess * excess / 4.0);
  s.quantile = EmpiricalQuantile(series, alpha);
  // Round-off can put the mean a hair outside [min, max] for constant-ish data.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

std::vector<SummaryStats> ComputeSummaryStats(const ReturnPanel& panel, double alpha) {
  std::vector<SummaryStats> out;
  const Eigen::MatrixXd& r = panel.returns();
  for (std::size_t j = 0; j < panel.num_series(); ++j) {
    const Eigen::VectorXd col = r.col(static_cast<Eigen::Index>(j));
    out.push_back(ComputeSummaryStats(std::span<const double>(col.data(), col.size()), alpha,
                                      panel.names()[j]));
  }
  return out;
}

}  // namespace mscorisk
