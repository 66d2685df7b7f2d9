#pragma once

#include <functional>
#include <vector>

namespace buls::optimize {

struct SimplexOptions {
  // stop when every vertex lies within this distance (max-norm) of the best one
  double diameter_tol = 1e-9;
  int max_evaluations = 40000;
  double initial_step = 0.1;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Adaptive Nelder-Mead minimization (dimension-dependent coefficients).
/// Non-finite objective values are treated as +inf.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const SimplexOptions& opts = {});

}  // namespace buls::optimize
