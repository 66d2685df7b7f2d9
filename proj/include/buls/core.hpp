#pragma once

// Bivariate unit-log-symmetric (BULS) distribution on (0,1)^2:
// W_i = 1 - exp(-T_i), T_i = eta_i * exp(sigma_i * Z_i), with (Z_1, Z_2) elliptical.

#include <array>
#include <string>
#include <vector>

#include "buls/generators.hpp"

namespace buls {

struct ModelParams {
  double eta1 = 1.0;
  double eta2 = 1.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho = 0.0;

  /// Throws DomainError unless eta, sigma > 0 and |rho| < 1.
  void validate() const;
  double eta(int i) const { return i == 1 ? eta1 : eta2; }
  double sigma(int i) const { return i == 1 ? sigma1 : sigma2; }
  double mu(int i) const;

  std::array<double, 5> to_array() const { return {eta1, eta2, sigma1, sigma2, rho}; }
  static ModelParams from_array(const std::array<double, 5>& a) { return {a[0], a[1], a[2], a[3], a[4]}; }
};

/// A point of the open unit square. The latent coordinates t_i = -ln(1 - w_i)
/// are kept alongside so that ln(1 - w_i) stays exact when w_i rounds to 1.
class UnitPoint {
 public:
  UnitPoint() = default;
  static UnitPoint from_unit(double w1, double w2);
  static UnitPoint from_latent(double t1, double t2);

  double w1() const { return w_[0]; }
  double w2() const { return w_[1]; }
  double w(int i) const { return w_[i - 1]; }
  double t(int i) const { return t_[i - 1]; }

 private:
  std::array<double, 2> w_{0.5, 0.5};
  std::array<double, 2> t_{0.6931471805599453, 0.6931471805599453};
};

/// Open interval (lo, hi) inside [0, 1].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  void validate() const;
};

struct BivariateDataset {
  std::vector<UnitPoint> rows;
  std::string label;

  std::size_t size() const { return rows.size(); }
};

/// -ln(1 - w) for w in (0, 1).
double latent_of(double w);
/// Standardized log-latent coordinate (ln t - ln eta) / sigma.
double standardize(double t, double eta, double sigma);
/// (z1^2 - 2 rho z1 z2 + z2^2) / (1 - rho^2).
double quadratic_form(double rho, double z1, double z2);

double joint_logpdf(const Generator& gen, const ModelParams& theta, const UnitPoint& p);
double joint_pdf(const Generator& gen, const ModelParams& theta, const UnitPoint& p);
/// Log-density of the positive pair (T1, T2) at the latent coordinates of p.
double latent_logpdf(const Generator& gen, const ModelParams& theta, const UnitPoint& p);

double marginal_logpdf(const Generator& gen, const ModelParams& theta, int i, double w);
double marginal_pdf(const Generator& gen, const ModelParams& theta, int i, double w);
double marginal_cdf(const Generator& gen, const ModelParams& theta, int i, double w);
double marginal_quantile(const Generator& gen, const ModelParams& theta, int i, double p);

/// P(W1 <= w1, W2 <= w2). Closed bivariate-normal integral for the Gaussian
/// generator, one-dimensional conditional integral otherwise.
double joint_cdf(const Generator& gen, const ModelParams& theta, const UnitPoint& p);

double cond_pdf_w2_given_w1(const Generator& gen, const ModelParams& theta, double w1, double w2);
/// Log of the same density, evaluated from the latent coordinates of p.
double cond_logpdf_w2_given_w1(const Generator& gen, const ModelParams& theta, const UnitPoint& p);
/// Density of W1 given W2 in B.
double cond_pdf_w1_given_w2_in(const Generator& gen, const ModelParams& theta, double w1, const Interval& b);
/// Log-density of W1 given W2 in B at the point with latent coordinate t1.
double cond_logpdf_w1_given_w2_in(const Generator& gen, const ModelParams& theta, double t1, const Interval& b);

double mahalanobis_sq(const ModelParams& theta, const UnitPoint& p);
double maha_pdf(const Generator& gen, double x);
double maha_cdf(const Generator& gen, double x);
double maha_quantile(const Generator& gen, double p);

/// E(W_i^r). Throws DivergenceError for negative r when the lower tail of
/// the integrand does not decay.
double moment(const Generator& gen, const ModelParams& theta, int i, double r);

}  // namespace buls
