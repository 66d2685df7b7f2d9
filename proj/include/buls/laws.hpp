#pragma once

// Univariate laws used as Z-marginals, Z-conditionals and radial (R^2) laws.

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace buls {

class UnivariateLaw {
 public:
  virtual ~UnivariateLaw() = default;

  virtual double log_pdf(double x) const = 0;
  double pdf(double x) const;
  virtual double cdf(double x) const = 0;
  /// Upper tail 1 - cdf(x); overridden where it can be computed without cancellation.
  virtual double sf(double x) const { return 1.0 - cdf(x); }
  virtual double quantile(double p) const;
  /// P(lo < X < hi), choosing the tail that avoids cancellation.
  virtual double prob(double lo, double hi) const;

  virtual double support_lo() const;
  virtual std::string name() const = 0;
};

using LawPtr = std::shared_ptr<const UnivariateLaw>;

/// Laws symmetric about zero; subclasses supply the upper tail on [0, inf).
class SymmetricLaw : public UnivariateLaw {
 public:
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double p) const override;
  double prob(double lo, double hi) const override;

 protected:
  virtual double upper_tail(double y) const = 0;
  /// Inverse of upper_tail on (0, 1/2]; default is a bracketed root search.
  virtual double upper_tail_inverse(double tail) const;
};

class StandardNormalLaw final : public SymmetricLaw {
 public:
  double log_pdf(double x) const override;
  std::string name() const override { return "N(0,1)"; }

 protected:
  double upper_tail(double y) const override;
  double upper_tail_inverse(double tail) const override;
};

/// scale * t_nu.
class ScaledStudentLaw final : public SymmetricLaw {
 public:
  ScaledStudentLaw(double nu, double scale);
  double log_pdf(double x) const override;
  std::string name() const override;

 protected:
  double upper_tail(double y) const override;
  double upper_tail_inverse(double tail) const override;

 private:
  double nu_;
  double scale_;
};

/// Centered symmetric generalized hyperbolic law GH(lambda, alpha, delta),
/// lambda in {1/2, 1, 3/2}.
class GeneralizedHyperbolicLaw final : public SymmetricLaw {
 public:
  GeneralizedHyperbolicLaw(double lambda, double alpha, double delta);
  double log_pdf(double x) const override;
  std::string name() const override;

  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }

 protected:
  double upper_tail(double y) const override;

 private:
  double lambda_;
  double alpha_;
  double delta_;
  double log_norm_;
};

/// Laplace law with location 0 and scale b, pdf exp(-|x|/b)/(2b).
class LaplaceLaw final : public SymmetricLaw {
 public:
  explicit LaplaceLaw(double scale);
  double log_pdf(double x) const override;
  std::string name() const override;

 protected:
  double upper_tail(double y) const override;
  double upper_tail_inverse(double tail) const override;

 private:
  double scale_;
};

/// Classical slash law SL(q): N(0,1) / U^{1/q}.
class SlashLaw final : public SymmetricLaw {
 public:
  explicit SlashLaw(double q);
  double log_pdf(double x) const override;
  std::string name() const override;

 protected:
  double upper_tail(double y) const override;

 private:
  double q_;
  double log_norm_;
};

/// Extended slash law ESL(a, Q) with density
/// int_0^1 t^Q phi(ta) phi(ty) dt / int_0^1 u^{Q-1} phi(ua) du.
class ExtendedSlashLaw final : public SymmetricLaw {
 public:
  ExtendedSlashLaw(double a, double q);
  double log_pdf(double x) const override;
  std::string name() const override;

 protected:
  double upper_tail(double y) const override;

 private:
  double a_;
  double q_;
  double log_den_;
};

/// Law on [0, inf) given by a log-density and a survival function.
/// Either a closed-form quantile is supplied, or a monotone inverse table
/// (2048 log-spaced knots) is built at construction and polished by root finding.
class RadialLaw final : public UnivariateLaw {
 public:
  using Fn = std::function<double(double)>;

  RadialLaw(std::string name, Fn log_pdf, Fn sf, Fn quantile = nullptr);

  double log_pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double p) const override;
  double prob(double lo, double hi) const override;
  double support_lo() const override { return 0.0; }
  std::string name() const override { return name_; }

 private:
  void build_table();

  std::string name_;
  Fn log_pdf_;
  Fn sf_;
  Fn quantile_;
  std::vector<double> knots_;
  std::vector<double> knot_cdf_;
};

}  // namespace buls
