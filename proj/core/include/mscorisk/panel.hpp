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

#ifndef MSCORISK_PANEL_HPP_
#define MSCORISK_PANEL_HPP_

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace mscorisk {

using Date = std::chrono::year_month_day;

// Parses YYYY-MM-DD. Returns nullopt on any malformed or invalid date.
std::optional<Date> ParseIsoDate(std::string_view text);
std::string FormatIsoDate(const Date& date);

// Which columns of a CSV file to read. An empty date column means "first
// column"; empty value columns means "every other column".
struct CsvLayout {
  std::string date_column;
  std::vector<std::string> value_columns;
};

// Raw dated matrix as read from disk: either prices or returns.
struct DatedTable {
  std::vector<Date> dates;
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // rows = dates, cols = names
};

// A dated T x p matrix of log-returns. Dates are strictly increasing, every
// cell is finite and p >= 2.
class ReturnPanel {
 public:
  ReturnPanel(std::vector<Date> dates, std::vector<std::string> names,
              Eigen::MatrixXd returns);
  explicit ReturnPanel(DatedTable table);

  const std::vector<Date>& dates() const { return dates_; }
  const std::vector<std::string>& names() const { return names_; }
  const Eigen::MatrixXd& returns() const { return returns_; }
  std::size_t num_periods() const { return static_cast<std::size_t>(returns_.rows()); }
  std::size_t num_series() const { return static_cast<std::size_t>(returns_.cols()); }

  // Sub-panel with the given columns, in the given order.
  ReturnPanel SelectColumns(std::span<const std::size_t> columns) const;

 private:
  std::vector<Date> dates_;
  std::vector<std::string> names_;
  Eigen::MatrixXd returns_;
};

// Reads a comma-separated file whose header row names the columns. Lines
// starting with '#' are comments. Rows with unparseable cells are reported
// together, with their 1-based line numbers.
DatedTable ReadCsv(std::istream& in, const CsvLayout& layout = {});
DatedTable ReadCsv(const std::string& path, const CsvLayout& layout = {});

// Loads a file of returns.
ReturnPanel LoadCsv(const std::string& path, const CsvLayout& layout = {});
// Loads a file of prices and converts to log-returns (one row shorter).
ReturnPanel LoadPriceCsv(const std::string& path, const CsvLayout& layout = {});

// returns[t] = log(prices[t + 1]) - log(prices[t]). Throws on any price <= 0.
Eigen::MatrixXd PricesToLogReturns(const Eigen::MatrixXd& prices);
ReturnPanel PricesToLogReturns(const DatedTable& prices);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatNumber(double value);

void WritePanelCsv(std::ostream& out, const ReturnPanel& panel);

struct SummaryStats {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;   // sample standard deviation (T - 1 denominator)
  double skewness = 0.0;  // m3 / m2^1.5
  double kurtosis = 0.0;  // m4 / m2^2, raw (3 under normality)
  double quantile = 0.0;  // empirical quantile at `alpha`
  double alpha = 0.0;
  double jarque_bera = 0.0;
};

// Type-7 (linear interpolation between order statistics) quantile.
double EmpiricalQuantile(std::span<const double> values, double alpha);

SummaryStats ComputeSummaryStats(std::span<const double> series, double alpha,
                                 std::string name = {});
std::vector<SummaryStats> ComputeSummaryStats(const ReturnPanel& panel,
                                              double alpha);

}  // namespace mscorisk

#endif  // MSCORISK_PANEL_HPP_
