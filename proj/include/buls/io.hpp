#pragma once

// CSV, JSON and SVG serialization.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "buls/experiments.hpp"

namespace buls::io {

/// Header `w1,w2`, one point per line, values strictly inside (0, 1).
/// Throws DataError naming the source and line of the first bad row.
BivariateDataset parse_csv(std::istream& in, const std::string& source = "<input>");
BivariateDataset read_csv(const std::string& path);

/// 17 significant digits, so a read back gives the same doubles.
void write_csv(std::ostream& out, const BivariateDataset& data);
void write_csv(const std::string& path, const BivariateDataset& data);

/// printf %g with the given number of significant digits; "nan"/"inf" as is.
std::string format_sig(double x, int digits = 6);

nlohmann::json to_json(const ModelParams& theta);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const ColumnSummary& s);
nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const MCReport& r);
nlohmann::json to_json(const QQSeries& qq);

/// keys: model, shape (optional), theta {eta1, eta2, sigma1, sigma2, rho},
/// sample_sizes, replications, confidence (optional), seed (optional).
/// Throws DomainError on a missing or ill-typed key.
MCConfig mc_config_from_json(const nlohmann::json& j);

void write_fit_csv(std::ostream& out, const std::vector<FitResult>& results);
/// One row per (sample size, parameter).
void write_mc_csv(std::ostream& out, const MCReport& r);
void write_qq_csv(std::ostream& out, const QQSeries& qq);
/// Scatter of the pairs with the 45 degree reference line.
void write_qq_svg(std::ostream& out, const QQSeries& qq);

}  // namespace buls::io
