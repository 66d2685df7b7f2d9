#pragma once

// Maximum-likelihood estimation for BULS models.
//
// The reported log-likelihood is that of the latent pair T_i = -ln(1 - W_i);
// the unit-square version differs by the data-only term sum(t1 + t2) and is
// kept alongside as loglik_unit. Both have the same maximizer.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "buls/core.hpp"

namespace buls {

/// Latent log-coordinates of a dataset, laid out for the vector kernels.
class PreparedData {
 public:
  explicit PreparedData(const BivariateDataset& data);

  std::size_t size() const { return x1_.size(); }
  const std::vector<double>& x1() const { return x1_; }
  const std::vector<double>& x2() const { return x2_; }
  /// sum over rows of ln t1 + ln t2
  double sum_log_t() const { return sum_log_t_; }
  /// sum over rows of t1 + t2
  double sum_t() const { return sum_t_; }

 private:
  std::vector<double> x1_, x2_;
  double sum_log_t_ = 0.0;
  double sum_t_ = 0.0;
};

double loglik(const Generator& gen, const ModelParams& theta, const PreparedData& data);
double loglik(const Generator& gen, const ModelParams& theta, const BivariateDataset& data);
double loglik_unit(const Generator& gen, const ModelParams& theta, const BivariateDataset& data);

/// Analytic gradient in (eta1, eta2, sigma1, sigma2, rho) order.
std::array<double, 5> score(const Generator& gen, const ModelParams& theta, const PreparedData& data);
std::array<double, 5> score(const Generator& gen, const ModelParams& theta, const BivariateDataset& data);

/// Unconstrained coordinates (ln eta1, ln eta2, ln sigma1, ln sigma2, atanh rho).
std::array<double, 5> to_free(const ModelParams& theta);
ModelParams from_free(const std::array<double, 5>& phi);

struct FitOptions {
  int restarts = 3;
  double diameter_tol = 1e-9;
  int max_evaluations = 40000;
  std::uint64_t seed = 20240611;
  double score_tol = 1e-4;
  bool compute_se = true;
  std::optional<ModelParams> start;
};

struct FitResult {
  Generator gen = Generator::normal();
  ModelParams theta_hat;
  std::array<double, 5> se{};
  double loglik = 0.0;
  double loglik_unit = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  bool converged = false;
  int iterations = 0;
  /// max |d loglik / d phi| / n over the free coordinates phi
  double score_norm = 0.0;
};

/// Number of parameters counted by the information criteria.
inline constexpr int kFreeParameters = 5;

/// Method-of-moments start on the log-latent coordinates.
ModelParams moment_start(const PreparedData& data);

FitResult fit(const Generator& gen, const BivariateDataset& data, const FitOptions& opts = {});

struct ProfileEntry {
  double shape = 0.0;
  std::optional<FitResult> result;
  std::string error;
};

struct ProfileResult {
  FitResult best;
  double shape = 0.0;
  std::vector<ProfileEntry> entries;
  std::vector<std::string> warnings;
};

/// Integer grid 1..30.
std::vector<double> default_shape_grid();

/// Fits every grid shape (concurrently) and keeps the largest log-likelihood.
ProfileResult profile_fit(Kind kind, const BivariateDataset& data, const std::vector<double>& grid,
                          const FitOptions& opts = {});

struct RhoBracket {
  bool found = false;
  double lo = 0.0;
  double hi = 0.0;
  double root = 0.0;
};

/// Scans d loglik / d rho over (-0.999, 0.999) with the other parameters fixed.
RhoBracket rho_root_exists(const Generator& gen, const BivariateDataset& data, double eta1, double eta2,
                           double sigma1, double sigma2, int grid_points = 400);

}  // namespace buls
