#include "buls/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "buls/errors.hpp"

namespace buls::optimize {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const SimplexOptions& opts) {
  const std::size_t d = x0.size();
  if (d == 0) throw DomainError("nelder_mead: empty starting point");
  const double n = static_cast<double>(d);
  // Gao and Han coefficients
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / n;
  const double gamma = 0.75 - 1.0 / (2.0 * n);
  const double delta = 1.0 - 1.0 / n;

  int evals = 0;
  const auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> pts(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += opts.initial_step;
  std::vector<double> val(d + 1);
  for (std::size_t i = 0; i <= d; ++i) val[i] = eval(pts[i]);

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), trial(d), trial2(d);
  const auto point = [&](double t, std::vector<double>& out) {
    // centroid + t (centroid - worst)
    const auto& worst = pts[order[d]];
    for (std::size_t k = 0; k < d; ++k) out[k] = centroid[k] + t * (centroid[k] - worst[k]);
  };

  bool converged = false;
  while (evals < opts.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const auto& best = pts[order[0]];
    double diameter = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t k = 0; k < d; ++k) diameter = std::max(diameter, std::abs(pts[order[i]][k] - best[k]));
    }
    if (diameter < opts.diameter_tol && std::isfinite(val[order[0]])) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[order[i]][k] / n;
    }
    const double f_best = val[order[0]];
    const double f_second = val[order[d - 1]];
    const double f_worst = val[order[d]];

    point(alpha, trial);
    const double f_r = eval(trial);
    if (f_r < f_best) {
      point(alpha * beta, trial2);
      const double f_e = eval(trial2);
      if (f_e < f_r) {
        pts[order[d]] = trial2;
        val[order[d]] = f_e;
      } else {
        pts[order[d]] = trial;
        val[order[d]] = f_r;
      }
      continue;
    }
    if (f_r < f_second) {
      pts[order[d]] = trial;
      val[order[d]] = f_r;
      continue;
    }
    // contraction, outside or inside
    const bool outside = f_r < f_worst;
    point(outside ? alpha * gamma : -gamma, trial2);
    const double f_c = eval(trial2);
    if (f_c < (outside ? f_r : f_worst)) {
      pts[order[d]] = trial2;
      val[order[d]] = f_c;
      continue;
    }
    // shrink toward the best vertex
    const std::vector<double> anchor = pts[order[0]];
    for (std::size_t i = 1; i <= d; ++i) {
      auto& p = pts[order[i]];
      for (std::size_t k = 0; k < d; ++k) p[k] = anchor[k] + delta * (p[k] - anchor[k]);
      val[order[i]] = eval(p);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
  return {pts[best], val[best], evals, converged};
}

}  // namespace buls::optimize
