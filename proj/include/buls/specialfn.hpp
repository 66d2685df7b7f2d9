#pragma once

// Special-function kernel: gamma family, modified Bessel K of orders
// 0, 1/2, 1, 3/2, the standard normal and Student-t laws, and the regularized
// incomplete beta function. Everything here is pure and reentrant.

namespace buls::special {

struct Accuracy {
  double abs_tol = 1e-15;
  int max_iter = 2000;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;
inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811045253;
inline constexpr double kLnSqrt2Pi = 0.918938533204672741780329736405617640;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double gamma_p(double s, double x, Accuracy acc = {});
/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), computed without cancellation.
double gamma_q(double s, double x, Accuracy acc = {});

/// Lower incomplete gamma gamma(s, x) = int_0^x t^{s-1} e^{-t} dt.
double lower_inc_gamma(double s, double x, Accuracy acc = {});

/// x^{-s} gamma(s, x). Regular at x = 0, where it equals 1/s.
double scaled_lower_gamma(double s, double x, Accuracy acc = {});
/// ln(x^{-s} gamma(s, x)), safe for very large x.
double log_scaled_lower_gamma(double s, double x, Accuracy acc = {});
/// d/dx ln(x^{-s} gamma(s, x)); tends to -s/(s+1) as x -> 0.
double dlog_scaled_lower_gamma(double s, double x, Accuracy acc = {});

/// Modified Bessel function of the second kind K_order(x), order in {0, 1/2, 1, 3/2}.
double bessel_k(double order, double x);
/// Exponentially scaled e^x K_order(x); avoids underflow for large x.
double bessel_k_scaled(double order, double x);
/// ln K_order(x).
double log_bessel_k(double order, double x);

double normal_pdf(double x);
double normal_log_pdf(double x);
double normal_cdf(double x);
/// Upper tail 1 - Phi(x) without cancellation.
double normal_sf(double x);
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x, Accuracy acc = {});

double student_t_pdf(double nu, double x);
double student_t_log_pdf(double nu, double x);
double student_t_cdf(double nu, double x);
double student_t_sf(double nu, double x);
double student_t_quantile(double nu, double p);

}  // namespace buls::special
