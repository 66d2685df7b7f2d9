#pragma once

// The five density generators g_c of the bivariate log-symmetric family,
// their partition functions and the laws they induce on Z and R^2.

#include <optional>
#include <string>

#include "buls/laws.hpp"

namespace buls {

enum class Kind { Normal, StudentT, Hyperbolic, Laplace, Slash };

/// "normal", "student", "hyperbolic", "laplace", "slash" (also accepts "t", "student-t").
Kind parse_kind(const std::string& text);
std::string kind_name(Kind kind);
bool kind_has_shape(Kind kind);

class Generator {
 public:
  /// shape is nu for StudentT / Hyperbolic and q for Slash; must be absent otherwise.
  explicit Generator(Kind kind, std::optional<double> shape = std::nullopt);

  static Generator normal() { return Generator(Kind::Normal); }
  static Generator student(double nu) { return Generator(Kind::StudentT, nu); }
  static Generator hyperbolic(double nu) { return Generator(Kind::Hyperbolic, nu); }
  static Generator laplace() { return Generator(Kind::Laplace); }
  static Generator slash(double q) { return Generator(Kind::Slash, q); }

  Kind kind() const { return kind_; }
  std::optional<double> shape() const { return shape_; }
  /// Shape value, or 0 for shape-free kinds.
  double shape_or_zero() const { return shape_.value_or(0.0); }
  std::string label() const;

  double g(double x) const;
  double log_g(double x) const;
  /// g'(x) / g(x).
  double g_ratio(double x) const;

  double partition() const;
  double log_partition() const { return log_partition_; }

  const LawPtr& z_marginal() const { return z_marginal_; }
  LawPtr z2_given_z1(double x) const;
  const LawPtr& r2_law() const { return r2_law_; }

 private:
  Kind kind_;
  std::optional<double> shape_;
  double log_partition_;
  LawPtr z_marginal_;
  LawPtr r2_law_;
};

}  // namespace buls
