#pragma once

// Goodness-of-fit and association statistics used by the diagnostics and tests.

#include <cstddef>
#include <functional>
#include <vector>

namespace buls::gof {

/// sup |F_n - F| for a sample against a continuous cdf.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
/// sup |F_n - G_m| between two samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_sf(double lambda);
/// Critical value of the one-sample statistic at level alpha (Stephens' finite-n correction).
double ks_critical(double alpha, std::size_t n);
/// Critical value of the two-sample statistic at level alpha.
double ks_critical(double alpha, std::size_t n, std::size_t m);

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Quantile of the chi-square law with df degrees of freedom.
double chi_square_quantile(double df, double p);

}  // namespace buls::gof
