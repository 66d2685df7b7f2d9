#include "buls/gof.hpp"

#include <algorithm>
#include <cmath>

#include "buls/errors.hpp"
#include "buls/numeric.hpp"
#include "buls/specialfn.hpp"

namespace buls::gof {

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double kolmogorov_critical_lambda(double alpha) {
  const auto f = [alpha](double lambda) { return alpha - kolmogorov_sf(lambda); };
  return numeric::solve(f, 0.3, 5.0, f(0.3), f(5.0));
}

}  // namespace

double ks_critical(double alpha, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  return kolmogorov_critical_lambda(alpha) / (rn + 0.12 + 0.11 / rn);
}

double ks_critical(double alpha, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * m / static_cast<double>(n + m);
  const double rn = std::sqrt(ne);
  return kolmogorov_critical_lambda(alpha) / (rn + 0.12 + 0.11 / rn);
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("kendall_tau: need two equal-length samples");
  const std::size_t n = x.size();
  double concordant = 0.0;
  double ties_x = 0.0;
  double ties_y = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const double prod = dx * dy;
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) {
        ties_x += 1.0;
      } else if (dy == 0.0) {
        ties_y += 1.0;
      } else {
        concordant += prod > 0.0 ? 1.0 : -1.0;
        total += 1.0;
      }
    }
  }
  // tau-b
  const double denom = std::sqrt((total + ties_y) * (total + ties_x));
  return denom > 0.0 ? concordant / denom : 0.0;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("pearson: need two equal-length samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double chi_square_quantile(double df, double p) {
  if (!(df > 0.0) || !(p > 0.0 && p < 1.0)) throw DomainError("chi_square_quantile: bad arguments");
  const auto f = [&](double x) { return special::gamma_p(0.5 * df, 0.5 * x) - p; };
  double hi = std::max(1.0, df);
  while (f(hi) < 0.0) hi *= 2.0;
  return numeric::solve(f, 0.0, hi, -p, f(hi));
}

}  // namespace buls::gof
