#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace buls {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature stopped before meeting its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double error_bound)
      : std::runtime_error(what + " (achieved error bound " + std::to_string(error_bound) + ")"),
        error_bound_(error_bound) {}

  double error_bound() const noexcept { return error_bound_; }

 private:
  double error_bound_;
};

/// A moment integral whose integrand does not decay in the lower tail.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Log-likelihood term that evaluated to NaN or -inf.
class NonFiniteLikelihood : public std::runtime_error {
 public:
  explicit NonFiniteLikelihood(std::size_t row)
      : std::runtime_error("non-finite log-likelihood term at row " + std::to_string(row)), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Malformed or out-of-range input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monte Carlo study stopped because too many replications failed to fit.
class StudyAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace buls
