#include "buls/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "buls/errors.hpp"
#include "buls/kernels.hpp"
#include "buls/numeric.hpp"
#include "buls/optimize.hpp"
#include "buls/sampling.hpp"

namespace buls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Workspace {
  std::vector<double> z1, z2, q, g;

  void resize(std::size_t n) {
    z1.resize(n);
    z2.resize(n);
    q.resize(n);
    g.resize(n);
  }
};

Workspace& workspace(std::size_t n) {
  thread_local Workspace ws;
  ws.resize(n);
  return ws;
}

void standardize_all(const ModelParams& theta, const PreparedData& data, Workspace& ws) {
  kernels::QuadformParams p;
  p.mu1 = std::log(theta.eta1);
  p.mu2 = std::log(theta.eta2);
  p.inv_sigma1 = 1.0 / theta.sigma1;
  p.inv_sigma2 = 1.0 / theta.sigma2;
  p.rho = theta.rho;
  p.inv_one_minus_rho2 = 1.0 / (1.0 - theta.rho * theta.rho);
  kernels::active().quadform(data.x1().data(), data.x2().data(), data.size(), p, ws.z1.data(), ws.z2.data(),
                             ws.q.data());
}

std::size_t first_bad_row(const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return i;
  }
  return 0;
}

}  // namespace

PreparedData::PreparedData(const BivariateDataset& data) {
  x1_.reserve(data.size());
  x2_.reserve(data.size());
  for (const auto& r : data.rows) {
    x1_.push_back(std::log(r.t(1)));
    x2_.push_back(std::log(r.t(2)));
    sum_log_t_ += x1_.back() + x2_.back();
    sum_t_ += r.t(1) + r.t(2);
  }
}

double loglik(const Generator& gen, const ModelParams& theta, const PreparedData& data) {
  theta.validate();
  const std::size_t n = data.size();
  if (n == 0) throw DataError("log-likelihood of an empty dataset");
  auto& ws = workspace(n);
  standardize_all(theta, data, ws);
  const auto& k = kernels::active();
  double kernel_sum = 0.0;
  if (gen.kind() == Kind::Normal) {
    kernel_sum = -0.5 * k.sum(ws.q.data(), n);
    if (!std::isfinite(kernel_sum)) throw NonFiniteLikelihood(first_bad_row(ws.q));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      ws.g[i] = gen.log_g(ws.q[i]);
      if (!std::isfinite(ws.g[i])) throw NonFiniteLikelihood(i);
    }
    kernel_sum = k.sum(ws.g.data(), n);
  }
  const double dn = static_cast<double>(n);
  return -data.sum_log_t() - dn * (std::log(theta.sigma1) + std::log(theta.sigma2)) -
         0.5 * dn * std::log1p(-theta.rho * theta.rho) - dn * gen.log_partition() + kernel_sum;
}

double loglik(const Generator& gen, const ModelParams& theta, const BivariateDataset& data) {
  return loglik(gen, theta, PreparedData(data));
}

double loglik_unit(const Generator& gen, const ModelParams& theta, const BivariateDataset& data) {
  const PreparedData prepared(data);
  return loglik(gen, theta, prepared) + prepared.sum_t();
}

std::array<double, 5> score(const Generator& gen, const ModelParams& theta, const PreparedData& data) {
  theta.validate();
  const std::size_t n = data.size();
  if (n == 0) throw DataError("score of an empty dataset");
  auto& ws = workspace(n);
  standardize_all(theta, data, ws);
  for (std::size_t i = 0; i < n; ++i) {
    ws.g[i] = gen.g_ratio(ws.q[i]);
    if (!std::isfinite(ws.g[i])) throw NonFiniteLikelihood(i);
  }
  const auto s = kernels::active().score_sums(ws.z1.data(), ws.z2.data(), ws.g.data(), n, theta.rho);
  const double dn = static_cast<double>(n);
  const double omr = 1.0 - theta.rho * theta.rho;
  return {2.0 / (theta.sigma1 * theta.eta1 * omr) * s[0], 2.0 / (theta.sigma2 * theta.eta2 * omr) * s[1],
          -dn / theta.sigma1 + 2.0 / (theta.sigma1 * omr) * s[2], -dn / theta.sigma2 + 2.0 / (theta.sigma2 * omr) * s[3],
          dn * theta.rho / omr - 2.0 / (omr * omr) * s[4]};
}

std::array<double, 5> score(const Generator& gen, const ModelParams& theta, const BivariateDataset& data) {
  return score(gen, theta, PreparedData(data));
}

std::array<double, 5> to_free(const ModelParams& theta) {
  return {std::log(theta.eta1), std::log(theta.eta2), std::log(theta.sigma1), std::log(theta.sigma2),
          std::atanh(theta.rho)};
}

ModelParams from_free(const std::array<double, 5>& phi) {
  return {std::exp(phi[0]), std::exp(phi[1]), std::exp(phi[2]), std::exp(phi[3]), std::tanh(phi[4])};
}

ModelParams moment_start(const PreparedData& data) {
  const auto& a = data.x1();
  const auto& b = data.x2();
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  const double s1 = std::max(std::sqrt(saa / (n - 1.0)), 1e-3);
  const double s2 = std::max(std::sqrt(sbb / (n - 1.0)), 1e-3);
  const double r = saa > 0.0 && sbb > 0.0 ? sab / std::sqrt(saa * sbb) : 0.0;
  return {std::exp(ma), std::exp(mb), s1, s2, std::clamp(r, -0.95, 0.95)};
}

namespace {

// Scaled score: gradient with respect to the free coordinates, per observation.
double free_score_norm(const Generator& gen, const ModelParams& th, const PreparedData& data) {
  try {
    const auto s = score(gen, th, data);
    const std::array<double, 5> scaled{th.eta1 * s[0], th.eta2 * s[1], th.sigma1 * s[2], th.sigma2 * s[3],
                                       (1.0 - th.rho * th.rho) * s[4]};
    double m = 0.0;
    for (double v : scaled) m = std::max(m, std::abs(v) / static_cast<double>(data.size()));
    return std::isfinite(m) ? m : kInf;
  } catch (const NonFiniteLikelihood&) {
    return kInf;
  } catch (const DomainError&) {
    return kInf;
  }
}

double free_loglik(const Generator& gen, const PreparedData& data, const std::array<double, 5>& phi) {
  try {
    const ModelParams th = from_free(phi);
    if (!(std::abs(th.rho) < 1.0) || !(th.eta1 > 0.0 && th.eta2 > 0.0 && th.sigma1 > 0.0 && th.sigma2 > 0.0) ||
        !std::isfinite(th.eta1 * th.eta2 * th.sigma1 * th.sigma2)) {
      return -kInf;
    }
    return loglik(gen, th, data);
  } catch (const NonFiniteLikelihood&) {
    return -kInf;
  }
}

// Standard errors from the inverse observed information in free coordinates,
// mapped back with the delta method. NaN when the Hessian is not negative definite.
std::array<double, 5> standard_errors(const Generator& gen, const PreparedData& data, const std::array<double, 5>& phi) {
  constexpr int d = 5;
  const auto f = [&](const std::array<double, 5>& x) { return free_loglik(gen, data, x); };
  std::array<double, d> h{};
  for (int i = 0; i < d; ++i) h[i] = 1e-4 * (1.0 + std::abs(phi[i]));
  const double f0 = f(phi);
  const auto shifted = [&](int i, double si, int j, double sj) {
    auto x = phi;
    x[i] += si * h[i];
    if (j >= 0) x[j] += sj * h[j];
    return f(x);
  };
  Eigen::Matrix<double, d, d> hess;
  for (int i = 0; i < d; ++i) {
    hess(i, i) = (-shifted(i, 2, -1, 0) + 16.0 * shifted(i, 1, -1, 0) - 30.0 * f0 + 16.0 * shifted(i, -1, -1, 0) -
                  shifted(i, -2, -1, 0)) /
                 (12.0 * h[i] * h[i]);
    for (int j = 0; j < i; ++j) {
      // Richardson-combined mixed differences at steps h and 2h
      const auto mixed = [&](double s) {
        return (shifted(i, s, j, s) - shifted(i, s, j, -s) - shifted(i, -s, j, s) + shifted(i, -s, j, -s)) /
               (4.0 * s * s * h[i] * h[j]);
      };
      hess(i, j) = hess(j, i) = (16.0 * mixed(1.0) - mixed(2.0)) / 15.0;
    }
  }
  std::array<double, 5> se;
  se.fill(std::numeric_limits<double>::quiet_NaN());
  if (!hess.allFinite()) return se;
  const Eigen::Matrix<double, d, d> info = -hess;
  Eigen::LDLT<Eigen::Matrix<double, d, d>> ldlt(info);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().array() <= 0.0).any()) return se;
  const Eigen::Matrix<double, d, d> cov = ldlt.solve(Eigen::Matrix<double, d, d>::Identity());
  const ModelParams th = from_free(phi);
  const std::array<double, 5> jac{th.eta1, th.eta2, th.sigma1, th.sigma2, 1.0 - th.rho * th.rho};
  for (int i = 0; i < d; ++i) {
    if (cov(i, i) > 0.0) se[i] = jac[i] * std::sqrt(cov(i, i));
  }
  return se;
}

}  // namespace

FitResult fit(const Generator& gen, const BivariateDataset& data, const FitOptions& opts) {
  if (data.size() < 6) throw DataError("fitting needs at least 6 observations");
  const PreparedData prepared(data);
  const ModelParams start = opts.start ? *opts.start : moment_start(prepared);
  start.validate();

  const auto objective = [&](const std::vector<double>& x) {
    return -free_loglik(gen, prepared, {x[0], x[1], x[2], x[3], x[4]});
  };
  optimize::SimplexOptions sopts;
  sopts.diameter_tol = opts.diameter_tol;
  sopts.max_evaluations = opts.max_evaluations;

  const auto phi0 = to_free(start);
  auto best = optimize::nelder_mead(objective, {phi0.begin(), phi0.end()}, sopts);
  int evaluations = best.evaluations;
  RandomSource rng(opts.seed);
  for (int r = 0; r < opts.restarts; ++r) {
    // restart from a jittered copy of the incumbent with a fresh simplex
    std::vector<double> x = best.x;
    for (double& v : x) v += 0.1 * rng.normal();
    auto trial = optimize::nelder_mead(objective, x, sopts);
    evaluations += trial.evaluations;
    if (trial.value < best.value || (trial.value == best.value && trial.converged && !best.converged)) {
      best = trial;
    }
  }
  // a final polish from the incumbent itself
  auto polish = optimize::nelder_mead(objective, best.x, sopts);
  evaluations += polish.evaluations;
  if (polish.value <= best.value) best = polish;

  FitResult res;
  res.gen = gen;
  const std::array<double, 5> phi{best.x[0], best.x[1], best.x[2], best.x[3], best.x[4]};
  res.theta_hat = from_free(phi);
  res.iterations = evaluations;
  res.loglik = -best.value;
  res.loglik_unit = res.loglik + prepared.sum_t();
  const double n = static_cast<double>(data.size());
  res.aic = -2.0 * res.loglik + 2.0 * kFreeParameters;
  res.bic = -2.0 * res.loglik + kFreeParameters * std::log(n);
  res.score_norm = free_score_norm(gen, res.theta_hat, prepared);
  res.converged = best.converged && std::isfinite(res.loglik) && res.score_norm < opts.score_tol;
  if (opts.compute_se) {
    res.se = standard_errors(gen, prepared, phi);
  } else {
    res.se.fill(std::numeric_limits<double>::quiet_NaN());
  }
  return res;
}

std::vector<double> default_shape_grid() {
  std::vector<double> grid;
  for (int v = 1; v <= 30; ++v) grid.push_back(v);
  return grid;
}

ProfileResult profile_fit(Kind kind, const BivariateDataset& data, const std::vector<double>& grid,
                          const FitOptions& opts) {
  if (!kind_has_shape(kind)) throw DomainError("profile_fit needs a generator with a shape parameter");
  if (grid.empty()) throw DomainError("profile_fit: empty shape grid");
  ProfileResult out;
  out.entries.resize(grid.size());
  numeric::parallel_for(grid.size(), [&](std::size_t i) {
    auto& e = out.entries[i];
    e.shape = grid[i];
    try {
      e.result = fit(Generator(kind, grid[i]), data, opts);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  });
  const FitResult* best = nullptr;
  for (const auto& e : out.entries) {
    if (!e.result) {
      out.warnings.push_back("shape " + std::to_string(e.shape) + " skipped: " + e.error);
      continue;
    }
    if (!e.result->converged) out.warnings.push_back("shape " + std::to_string(e.shape) + " did not converge");
    if (!best || e.result->loglik > best->loglik) {
      best = &*e.result;
      out.shape = e.shape;
    }
  }
  if (!best) throw DomainError("profile_fit: every grid point failed");
  out.best = *best;
  return out;
}

RhoBracket rho_root_exists(const Generator& gen, const BivariateDataset& data, double eta1, double eta2,
                           double sigma1, double sigma2, int grid_points) {
  RhoBracket out;
  if (data.size() == 0 || grid_points < 2) return out;
  const PreparedData prepared(data);
  const auto d_rho = [&](double rho) {
    try {
      return score(gen, {eta1, eta2, sigma1, sigma2, rho}, prepared)[4];
    } catch (const std::exception&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  const double lo = -0.999, hi = 0.999;
  double prev_x = lo;
  double prev = d_rho(lo);
  for (int k = 1; k < grid_points; ++k) {
    const double x = lo + (hi - lo) * k / (grid_points - 1);
    const double v = d_rho(x);
    if (std::isfinite(prev) && std::isfinite(v) && (prev == 0.0 || (prev > 0.0) != (v > 0.0))) {
      out.found = true;
      out.lo = prev_x;
      out.hi = x;
      out.root = prev == 0.0 ? prev_x : numeric::solve(d_rho, prev_x, x, prev, v);
      return out;
    }
    prev_x = x;
    prev = v;
  }
  return out;
}

}  // namespace buls
