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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "expect_error.hpp"

namespace mscorisk {
namespace {

DatedTable Parse(const std::string& text) {
  std::istringstream in(text);
  return ReadCsv(in);
}

ReturnPanel PanelOf(const Eigen::MatrixXd& y) {
  std::vector<Date> dates;
  for (Eigen::Index t = 0; t < y.rows(); ++t) {
    dates.push_back(std::chrono::sys_days(std::chrono::year{2001} / 1 / 5) +
                    std::chrono::days(7 * t));
  }
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < y.cols(); ++j) names.push_back("s" + std::to_string(j));
  return ReturnPanel(dates, names, y);
}

TEST(DateTest, ParsesIsoDates) {
  const auto d = ParseIsoDate("2020-02-29");
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(FormatIsoDate(*d), "2020-02-29");
  EXPECT_FALSE(ParseIsoDate("2021-02-29").has_value());
  EXPECT_FALSE(ParseIsoDate("2021-2-01").has_value());
  EXPECT_FALSE(ParseIsoDate("20210201").has_value());
  EXPECT_FALSE(ParseIsoDate("2021-01-01x").has_value());
}

TEST(ReadCsvTest, MinimalValidInput) {
  const ReturnPanel panel(
      Parse("date,a,b\n2020-01-03,0.1,0.2\n2020-01-10,-0.1,0.0\n2020-01-17,0.3,-0.2\n"));
  EXPECT_EQ(panel.num_periods(), 3u);
  EXPECT_EQ(panel.num_series(), 2u);
  EXPECT_EQ(panel.names()[1], "b");
  EXPECT_DOUBLE_EQ(panel.returns()(2, 1), -0.2);
}

TEST(ReadCsvTest, SkipsCommentsAndSelectsColumns) {
  std::istringstream in("# note\nwhen,x,y,z\n2020-01-03,1,2,3\n2020-01-10,4,5,6\n");
  const DatedTable t = ReadCsv(in, {"when", {"z", "x"}});
  ASSERT_EQ(t.names.size(), 2u);
  EXPECT_EQ(t.names[0], "z");
  EXPECT_DOUBLE_EQ(t.values(1, 0), 6.0);
  EXPECT_DOUBLE_EQ(t.values(1, 1), 4.0);
}

TEST(ReadCsvTest, DuplicateDateNamesTheDate) {
  try {
    Parse("date,a,b\n2020-01-03,1,2\n2020-01-03,1,2\n");
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateDate);
    EXPECT_NE(std::string(e.what()).find("2020-01-03"), std::string::npos);
  }
}

TEST(ReadCsvTest, RejectsOutOfOrderDates) {
  EXPECT_MSCORISK_ERROR(Parse("date,a,b\n2020-01-10,1,2\n2020-01-03,1,2\n"),
                        ErrorCode::kNonMonotoneDates);
}

TEST(ReadCsvTest, RejectsRaggedRows) {
  EXPECT_MSCORISK_ERROR(Parse("date,a,b\n2020-01-03,1,2\n2020-01-10,1\n"),
                        ErrorCode::kRaggedRow);
}

TEST(ReadCsvTest, ReportsEveryBadRowWithLineNumbers) {
  try {
    Parse("date,a,b\n2020-01-03,1,2\n2020-01-10,x,2\n2020-01-17,1,2\nbad,1,2\n");
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    const std::string msg = e.what();
    EXPECT_NE(msg.find('3'), std::string::npos) << msg;
    EXPECT_NE(msg.find('5'), std::string::npos) << msg;
  }
}

TEST(ReadCsvTest, EmptyAndMissingInputs) {
  EXPECT_MSCORISK_ERROR(Parse(""), ErrorCode::kParse);
  EXPECT_MSCORISK_ERROR(Parse("date,a,b\n"), ErrorCode::kParse);
  EXPECT_MSCORISK_ERROR(ReadCsv(std::string("/nonexistent/file.csv")), ErrorCode::kIo);
}

TEST(ReturnPanelTest, NeedsTwoSeriesAndFiniteCells) {
  const Date d = *ParseIsoDate("2020-01-03");
  EXPECT_MSCORISK_ERROR(ReturnPanel({d}, {"a"}, Eigen::MatrixXd::Zero(1, 1)),
                        ErrorCode::kInvalidArgument);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(1, 2);
  y(0, 1) = std::nan("");
  EXPECT_MSCORISK_ERROR(ReturnPanel({d}, {"a", "b"}, y), ErrorCode::kInvalidArgument);
}

TEST(PricesTest, ConstantPricesGiveZeroReturns) {
  const Eigen::MatrixXd r = PricesToLogReturns(Eigen::MatrixXd::Constant(4, 2, 50.0));
  EXPECT_EQ(r.rows(), 3);
  EXPECT_EQ(r.cwiseAbs().maxCoeff(), 0.0);
}

TEST(PricesTest, LogIdentity) {
  Eigen::MatrixXd prices(2, 2);
  prices << 100.0, 100.0, 100.0 * std::exp(0.01), 100.0;
  const Eigen::MatrixXd r = PricesToLogReturns(prices);
  EXPECT_NEAR(r(0, 0), 0.01, 1e-15);
  EXPECT_EQ(r(0, 1), 0.0);
}

TEST(PricesTest, RejectsNonPositivePrices) {
  Eigen::MatrixXd prices = Eigen::MatrixXd::Constant(3, 2, 1.0);
  prices(1, 1) = 0.0;
  EXPECT_MSCORISK_ERROR(PricesToLogReturns(prices), ErrorCode::kNonPositivePrice);
}

TEST(PricesTest, CumulativeSumRecoversPrices) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 200.0);
  Eigen::MatrixXd prices(5, 2);
  for (auto& x : prices.reshaped()) x = u(rng);
  const Eigen::MatrixXd r = PricesToLogReturns(prices);
  for (Eigen::Index j = 0; j < 2; ++j) {
    double level = 0.0;
    for (Eigen::Index t = 0; t < 4; ++t) {
      level += r(t, j);
      EXPECT_NEAR(std::exp(level), prices(t + 1, j) / prices(0, j),
                  1e-13 * prices(t + 1, j) / prices(0, j));
    }
  }
}

TEST(PricesTest, LoadPriceCsvDropsOneRow) {
  const auto path = std::filesystem::temp_directory_path() / "mscorisk_prices.csv";
  {
    std::ofstream out(path);
    out << "date,a,b\n2020-01-03,10,20\n2020-01-10,11,19\n2020-01-17,12,21\n";
  }
  const ReturnPanel panel = LoadPriceCsv(path.string());
  EXPECT_EQ(panel.num_periods(), 2u);
  EXPECT_EQ(FormatIsoDate(panel.dates()[0]), "2020-01-10");
  EXPECT_NEAR(panel.returns()(0, 0), std::log(1.1), 1e-15);
  std::filesystem::remove(path);
}

TEST(PanelCsvTest, WriteThenReadIsExact) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  Eigen::MatrixXd y(20, 3);
  for (auto& x : y.reshaped()) x = n(rng) * 0.03;
  const ReturnPanel panel = PanelOf(y);
  std::stringstream buf;
  WritePanelCsv(buf, panel);
  const ReturnPanel back(ReadCsv(buf));
  EXPECT_EQ(back.returns(), y);
  EXPECT_EQ(back.names(), panel.names());
  EXPECT_EQ(back.dates(), panel.dates());
}

TEST(QuantileTest, TypeSevenInterpolation) {
  const std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(EmpiricalQuantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(EmpiricalQuantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(EmpiricalQuantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(EmpiricalQuantile(v, 1.0), 4.0);
}

TEST(QuantileTest, NondecreasingInLevel) {
  std::mt19937_64 rng(5);
  std::student_t_distribution<double> t(3.0);
  std::vector<double> v(501);
  for (auto& x : v) x = t(rng);
  double prev = -1e300;
  for (int k = 0; k <= 100; ++k) {
    const double q = EmpiricalQuantile(v, k / 100.0);
    EXPECT_GE(q, prev);
    prev = q;
  }
}

TEST(SummaryStatsTest, HandComputedMoments) {
  const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 30};
  const SummaryStats s = ComputeSummaryStats(v, 0.5, "x");
  const double n = 8.0, mean = 58.0 / 8.0;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d / n;
    m3 += d * d * d / n;
    m4 += d * d * d * d / n;
  }
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  EXPECT_DOUBLE_EQ(s.mean, mean);
  EXPECT_NEAR(s.std_dev, std::sqrt(m2 * n / (n - 1)), 1e-12);
  EXPECT_NEAR(s.skewness, skew, 1e-12);
  EXPECT_NEAR(s.kurtosis, kurt, 1e-12);
  EXPECT_NEAR(s.jarque_bera, n / 6.0 * (skew * skew + (kurt - 3) * (kurt - 3) / 4.0), 1e-10);
  EXPECT_DOUBLE_EQ(s.quantile, 4.5);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 30.0);
}

TEST(SummaryStatsTest, GaussianSampleHasKurtosisNearThree) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n;
  std::vector<double> v(100000);
  for (auto& x : v) x = n(rng);
  const SummaryStats s = ComputeSummaryStats(v, 0.01);
  EXPECT_NEAR(s.kurtosis, 3.0, 0.1);
  EXPECT_LT(s.jarque_bera, 9.2103);  // chi-square(2) 99% point
  EXPECT_LE(s.min, s.mean);
  EXPECT_LE(s.mean, s.max);
}

TEST(SummaryStatsTest, SpikeSignDrivesSkewness) {
  std::vector<double> up(40, 0.0), down(40, 0.0);
  for (std::size_t i = 0; i < up.size(); ++i) up[i] = down[i] = 0.001 * (i % 3);
  up[17] = 1.0;
  down[17] = -1.0;
  EXPECT_GT(ComputeSummaryStats(up, 0.05).skewness, 0.0);
  EXPECT_LT(ComputeSummaryStats(down, 0.05).skewness, 0.0);
}

TEST(SummaryStatsTest, MedianOfSymmetricData) {
  std::vector<double> v;
  for (int i = -10; i <= 10; ++i) v.push_back(i * 0.5);
  EXPECT_NEAR(ComputeSummaryStats(v, 0.5).quantile, 0.0, 1e-15);
}

TEST(SummaryStatsTest, Errors) {
  EXPECT_MSCORISK_ERROR(ComputeSummaryStats(std::vector<double>(10, 1.0), 0.05),
                        ErrorCode::kDegenerateSeries);
  EXPECT_MSCORISK_ERROR(ComputeSummaryStats(std::vector<double>{1, 2, 3}, 0.05),
                        ErrorCode::kInvalidArgument);
  EXPECT_MSCORISK_ERROR(ComputeSummaryStats(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8}, 1.0),
                        ErrorCode::kInvalidArgument);
}

TEST(SummaryStatsTest, ColumnReorderPermutesOutput) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  Eigen::MatrixXd y(50, 3);
  for (auto& x : y.reshaped()) x = n(rng);
  const ReturnPanel panel = PanelOf(y);
  const std::size_t order[] = {2, 0, 1};
  const auto a = ComputeSummaryStats(panel, 0.05);
  const auto b = ComputeSummaryStats(panel.SelectColumns(order), 0.05);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(b[k].name, a[order[k]].name);
    EXPECT_EQ(b[k].jarque_bera, a[order[k]].jarque_bera);
    EXPECT_EQ(b[k].quantile, a[order[k]].quantile);
  }
}

TEST(FormatNumberTest, RoundTrips) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    const double x = n(rng) * std::pow(10.0, i % 30 - 15);
    EXPECT_EQ(std::stod(FormatNumber(x)), x);
  }
  EXPECT_EQ(FormatNumber(0.05), "0.05");
}

}  // namespace
}  // namespace mscorisk
