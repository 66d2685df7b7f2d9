#pragma once

// Descriptive statistics, Monte Carlo bias/RMSE/coverage studies and
// Mahalanobis QQ series.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "buls/inference.hpp"

namespace buls {

/// Skewness / kurtosis estimators. m_k are central moments with divisor n,
/// s the standard deviation with divisor n - 1.
enum class MomentConvention {
  SampleSd,    // b1 = m3 / s^3, b2 = m4 / s^4 - 3
  Population,  // g1 = m3 / m2^1.5, g2 = m4 / m2^2 - 3
  Adjusted,    // G1, G2 (bias-adjusted g1, g2)
};

/// Accepts "b", "g" or "G".
MomentConvention parse_moment_convention(const std::string& text);

struct ColumnSummary {
  std::size_t n = 0;
  double min = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double sd = 0.0;
  /// 100 sd / mean
  double cv = 0.0;
  /// empty when undefined (constant column, or too few points for G2)
  std::optional<double> cs;
  std::optional<double> ck;
};

struct Summary {
  ColumnSummary w1;
  ColumnSummary w2;
};

/// Throws DataError for fewer than two values.
ColumnSummary describe_column(std::vector<double> values, MomentConvention conv = MomentConvention::SampleSd);
Summary describe(const BivariateDataset& data, MomentConvention conv = MomentConvention::SampleSd);

struct MCConfig {
  Generator gen = Generator::normal();
  ModelParams theta_true;
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 1000;
  double confidence = 0.95;
  std::uint64_t base_seed = 0;
  FitOptions fit;
  /// abort when more than this fraction of the fits at one sample size fail
  double max_failure_rate = 0.2;

  void validate() const;
};

struct ParamStats {
  double bias = 0.0;
  double rmse = 0.0;
  double cp = 0.0;
  /// binomial standard error of cp
  double cp_se = 0.0;
};

struct MCCell {
  std::size_t n = 0;
  std::size_t used = 0;
  std::size_t failed = 0;
  double failure_rate = 0.0;
  /// eta1, eta2, sigma1, sigma2, rho
  std::array<ParamStats, 5> params{};
};

struct MCReport {
  Generator gen = Generator::normal();
  ModelParams theta_true;
  std::size_t replications = 0;
  double confidence = 0.95;
  std::uint64_t base_seed = 0;
  std::vector<MCCell> cells;
};

/// Seed of replication rep at sample size n.
std::uint64_t replication_seed(std::uint64_t base, std::size_t n, std::size_t rep);

/// Throws StudyAborted when a sample size exceeds cfg.max_failure_rate.
MCReport mc_study(const MCConfig& cfg);

struct QQSeries {
  Generator gen = Generator::normal();
  /// (theoretical, empirical) squared Mahalanobis quantiles
  std::vector<std::pair<double, double>> pairs;
};

QQSeries qq_data(const Generator& gen, const ModelParams& theta, const BivariateDataset& data);

/// Largest internally studentized residual of the least-squares line through
/// the QQ pairs. Zero for fewer than three pairs.
double max_studentized_residual(const QQSeries& qq);

}  // namespace buls
