#include "buls/specialfn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "buls/errors.hpp"

namespace buls::special {
namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// Lanczos approximation, g = 7, n = 9.
double ln_gamma_lanczos(double x) {
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double a = c[0];
  const double t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
  return kLnSqrt2Pi + (z + 0.5) * std::log(t) - t + std::log(a);
}

// Stirling series with Bernoulli corrections through B_14.
double ln_gamma_stirling(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  const double series =
      r * (1.0 / 12 +
           r2 * (-1.0 / 360 +
                 r2 * (1.0 / 1260 +
                       r2 * (-1.0 / 1680 + r2 * (1.0 / 1188 + r2 * (-691.0 / 360360 + r2 / 156.0))))));
  return (x - 0.5) * std::log(x) - x + kLnSqrt2Pi + series;
}

// sum_{n>=0} x^n / (s (s+1) ... (s+n)) and its x-derivative.
struct SeriesSum {
  double value;
  double derivative;
};

SeriesSum lower_gamma_series(double s, double x, const Accuracy& acc) {
  double term = 1.0 / s;
  double sum = term;
  double dsum = 0.0;
  for (int n = 1; n <= acc.max_iter; ++n) {
    // d/dx of x^n/(...) is n x^{n-1}/(...) = n * term_n / x; accumulate using term_{n-1}.
    dsum += n * term / (s + n);
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps * 0.5) return {sum, dsum};
  }
  throw DomainError("incomplete gamma series did not converge for s=" + std::to_string(s) +
                    ", x=" + std::to_string(x));
}

// Continued fraction for Gamma(s, x) e^x x^{-s} (modified Lentz).
double upper_gamma_cf(double s, double x, const Accuracy& acc) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= acc.max_iter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw DomainError("incomplete gamma continued fraction did not converge for s=" +
                    std::to_string(s) + ", x=" + std::to_string(x));
}

void check_gamma_args(double s, double x) {
  require(s > 0.0 && std::isfinite(s), "incomplete gamma: shape must be positive");
  require(x >= 0.0 && !std::isnan(x), "incomplete gamma: argument must be nonnegative");
}

// Ascending series for K0 and K1 on (0, 2].
void bessel_k01_series(double x, double& k0, double& k1) {
  const double y = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  // K0 = -(ln(x/2) + gamma) I0 + sum_{k>=1} H_k y^k/(k!)^2
  double t0 = 1.0;
  double i0 = 1.0;
  double harmonic = 0.0;
  double s0 = 0.0;
  // K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} (psi(k+1) + psi(k+2)) y^k/(k!(k+1)!)
  double t1 = 1.0;  // y^k/(k!(k+1)!)
  double i1 = 1.0;
  double s1 = (-kEulerGamma) + (1.0 - kEulerGamma);
  for (int k = 1; k < 60; ++k) {
    t0 *= y / (double(k) * k);
    harmonic += 1.0 / k;
    i0 += t0;
    s0 += harmonic * t0;
    t1 *= y / (double(k) * (k + 1));
    i1 += t1;
    s1 += (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * kEulerGamma) * t1;
    if (t0 < 1e-18 * i0 && t1 < 1e-18 * i1) break;
  }
  k0 = -(log_half + kEulerGamma) * i0 + s0;
  k1 = 1.0 / x + log_half * (0.5 * x * i1) - 0.25 * x * s1;
}

// Steed's continued fraction (Temme's CF2) for e^x K0(x) and e^x K1(x), x > 2.
void bessel_k01_cf_scaled(double x, double& k0s, double& k1s) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h = a1 * h;
  k0s = std::sqrt(kPi / (2.0 * x)) / s;
  k1s = k0s * (x + 0.5 - h) / x;
}

enum class BesselOrder { zero, half, one, three_halves };

BesselOrder classify_order(double order) {
  if (order == 0.0) return BesselOrder::zero;
  if (order == 0.5) return BesselOrder::half;
  if (order == 1.0) return BesselOrder::one;
  if (order == 1.5) return BesselOrder::three_halves;
  throw DomainError("bessel_k: unsupported order " + std::to_string(order));
}

// Safeguarded Newton on ln F(x) = ln p for a continuous CDF F on the negative half-line.
template <class Cdf, class Pdf>
double invert_left_tail(double p, Cdf cdf, Pdf pdf, double guess) {
  double hi = 0.0;
  double lo = std::min(-1.0, guess);
  int expand = 0;
  while (cdf(lo) >= p) {
    hi = lo;
    lo *= 2.0;
    if (++expand > 2100) return -std::numeric_limits<double>::infinity();
  }
  const double target = std::log(p);
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double fx = cdf(x);
    const double g = std::log(fx) - target;
    if (g > 0.0) hi = x; else lo = x;
    if (g == 0.0) return x;
    const double slope = pdf(x) / fx;
    double next = x - g / slope;
    if (!(next > lo && next < hi)) {
      // geometric midpoint when the bracket spans magnitudes
      next = (hi < 0.0 && lo / hi > 4.0) ? -std::sqrt(lo * hi) : 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= 4 * kEps * std::abs(x) || hi - lo <= 4 * kEps * std::abs(lo)) return next;
    x = next;
  }
  return x;
}

// I_x(a, b) continued fraction (modified Lentz).
double beta_cf(double a, double b, double x, const Accuracy& acc) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= acc.max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

// I_x(a, b) given both x and y = 1 - x to full precision.
double inc_beta_xy(double a, double b, double x, double y, const Accuracy& acc) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * std::log(x) + b * std::log(y);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_cf(a, b, x, acc) / a;
  return 1.0 - std::exp(log_front) * beta_cf(b, a, y, acc) / b;
}

// Lower tail of t_nu at x <= 0, with no cancellation.
double student_lower_tail(double nu, double x) {
  const double x2 = x * x;
  if (x2 < nu) {
    // 0.5 * (1 - I_{x^2/(nu+x^2)}(1/2, nu/2))
    const double u = x2 / (nu + x2);
    const double v = nu / (nu + x2);
    return 0.5 * (1.0 - inc_beta_xy(0.5, 0.5 * nu, u, v, {}));
  }
  const double u = nu / (nu + x2);
  const double v = x2 / (nu + x2);
  return 0.5 * inc_beta_xy(0.5 * nu, 0.5, u, v, {});
}

}  // namespace

double ln_gamma(double x) {
  require(x > 0.0 && !std::isnan(x), "ln_gamma: argument must be positive");
  if (std::isinf(x)) return x;
  if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - ln_gamma_lanczos(1.0 - x);
  if (x < 10.0) return ln_gamma_lanczos(x);
  return ln_gamma_stirling(x);
}

double gamma_p(double s, double x, Accuracy acc) {
  check_gamma_args(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) {
    const double sum = lower_gamma_series(s, x, acc).value;
    return std::exp(s * std::log(x) - x - ln_gamma(s)) * sum;
  }
  return 1.0 - std::exp(s * std::log(x) - x - ln_gamma(s)) * upper_gamma_cf(s, x, acc);
}

double gamma_q(double s, double x, Accuracy acc) {
  check_gamma_args(s, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) return 1.0 - gamma_p(s, x, acc);
  return std::exp(s * std::log(x) - x - ln_gamma(s)) * upper_gamma_cf(s, x, acc);
}

double lower_inc_gamma(double s, double x, Accuracy acc) {
  check_gamma_args(s, x);
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) return std::exp(s * std::log(x) - x) * lower_gamma_series(s, x, acc).value;
  return std::exp(ln_gamma(s)) * gamma_p(s, x, acc);
}

double scaled_lower_gamma(double s, double x, Accuracy acc) {
  return std::exp(log_scaled_lower_gamma(s, x, acc));
}

double log_scaled_lower_gamma(double s, double x, Accuracy acc) {
  check_gamma_args(s, x);
  if (x == 0.0) return -std::log(s);
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < s + 1.0) return -x + std::log(lower_gamma_series(s, x, acc).value);
  const double q = gamma_q(s, x, acc);
  return ln_gamma(s) - s * std::log(x) + std::log1p(-q);
}

double dlog_scaled_lower_gamma(double s, double x, Accuracy acc) {
  check_gamma_args(s, x);
  if (x < s + 1.0) {
    const auto series = lower_gamma_series(s, x, acc);
    return -1.0 + series.derivative / series.value;
  }
  // d/dx [ln gamma(s,x) - s ln x] = x^{s-1} e^{-x}/gamma(s,x) - s/x
  const double ratio = std::exp(-x - log_scaled_lower_gamma(s, x, acc));
  return (ratio - s) / x;
}

double bessel_k_scaled(double order, double x) {
  const BesselOrder kind = classify_order(order);
  require(x > 0.0 && !std::isnan(x), "bessel_k: argument must be positive");
  if (std::isinf(x)) return 0.0;
  switch (kind) {
    case BesselOrder::half:
      return std::sqrt(kPi / (2.0 * x));
    case BesselOrder::three_halves:
      return std::sqrt(kPi / (2.0 * x)) * (1.0 + 1.0 / x);
    case BesselOrder::zero:
    case BesselOrder::one: {
      double k0 = 0.0;
      double k1 = 0.0;
      if (x <= 2.0) {
        bessel_k01_series(x, k0, k1);
        const double scale = std::exp(x);
        k0 *= scale;
        k1 *= scale;
      } else {
        bessel_k01_cf_scaled(x, k0, k1);
      }
      return kind == BesselOrder::zero ? k0 : k1;
    }
  }
  return 0.0;
}

double bessel_k(double order, double x) {
  const double scaled = bessel_k_scaled(order, x);
  return scaled * std::exp(-x);
}

double log_bessel_k(double order, double x) { return std::log(bessel_k_scaled(order, x)) - x; }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_log_pdf(double x) { return -0.5 * x * x - kLnSqrt2Pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "normal_quantile: p must lie in (0, 1)");
  // Acklam's rational approximation, then Halley refinement against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    // work on the tail where the residual is computed without cancellation
    const double e = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - normal_sf(x);
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double inc_beta(double a, double b, double x, Accuracy acc) {
  require(a > 0.0 && b > 0.0, "inc_beta: shapes must be positive");
  require(x >= 0.0 && x <= 1.0, "inc_beta: x must lie in [0, 1]");
  return inc_beta_xy(a, b, x, 1.0 - x, acc);
}

double student_t_log_pdf(double nu, double x) {
  require(nu > 0.0, "student_t: degrees of freedom must be positive");
  return ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * std::log(nu * kPi) -
         0.5 * (nu + 1.0) * std::log1p(x * x / nu);
}

double student_t_pdf(double nu, double x) { return std::exp(student_t_log_pdf(nu, x)); }

double student_t_cdf(double nu, double x) {
  require(nu > 0.0, "student_t: degrees of freedom must be positive");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return std::isinf(x) ? 0.0 : student_lower_tail(nu, x);
  return std::isinf(x) ? 1.0 : 1.0 - student_lower_tail(nu, -x);
}

double student_t_sf(double nu, double x) { return student_t_cdf(nu, -x); }

double student_t_quantile(double nu, double p) {
  require(nu > 0.0, "student_t: degrees of freedom must be positive");
  require(p > 0.0 && p < 1.0, "student_t_quantile: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -student_t_quantile(nu, 1.0 - p);
  if (nu == 1.0) return std::tan(kPi * (p - 0.5));
  const double guess = normal_quantile(p);
  return invert_left_tail(
      p, [nu](double x) { return student_lower_tail(nu, x); },
      [nu](double x) { return student_t_pdf(nu, x); }, guess);
}

}  // namespace buls::special
