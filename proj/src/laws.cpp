#include "buls/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "buls/errors.hpp"
#include "buls/numeric.hpp"
#include "buls/specialfn.hpp"

namespace buls {
namespace sp = special;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Root of an increasing function f on [lo, hi], expanding hi by doubling until f(hi) > 0.
double increasing_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  for (int i = 0; fhi < 0.0 && i < 2000; ++i) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
  }
  return numeric::solve(f, lo, hi, flo, fhi);
}

}  // namespace

double UnivariateLaw::pdf(double x) const { return std::exp(log_pdf(x)); }

double UnivariateLaw::support_lo() const { return -kInf; }

double UnivariateLaw::quantile(double p) const {
  require_probability(p);
  double lo = -1.0;
  double hi = 1.0;
  while (cdf(lo) > p) lo *= 2.0;
  while (cdf(hi) < p) hi *= 2.0;
  const auto f = [&](double x) { return cdf(x) - p; };
  return numeric::solve(f, lo, hi, f(lo), f(hi));
}

double UnivariateLaw::prob(double lo, double hi) const {
  if (!(lo < hi)) return 0.0;
  const double clo = cdf(lo);
  if (clo > 0.5) return std::max(0.0, sf(lo) - sf(hi));
  return std::max(0.0, cdf(hi) - clo);
}

// --- symmetric laws ----------------------------------------------------------

double SymmetricLaw::cdf(double x) const {
  if (std::isnan(x)) return x;
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  if (x == 0.0) return 0.5;
  return x < 0.0 ? upper_tail(-x) : 1.0 - upper_tail(x);
}

double SymmetricLaw::sf(double x) const { return cdf(-x); }

double SymmetricLaw::quantile(double p) const {
  require_probability(p);
  if (p == 0.5) return 0.0;
  return p < 0.5 ? -upper_tail_inverse(p) : upper_tail_inverse(1.0 - p);
}

double SymmetricLaw::prob(double lo, double hi) const {
  if (!(lo < hi)) return 0.0;
  const auto tail = [this](double y) {
    if (y == kInf) return 0.0;
    if (y == 0.0) return 0.5;
    return upper_tail(y);
  };
  double p = 0.0;
  if (lo >= 0.0) {
    p = tail(lo) - tail(hi);
  } else if (hi <= 0.0) {
    p = tail(-hi) - tail(-lo);
  } else {
    p = 1.0 - tail(-lo) - tail(hi);
  }
  return std::max(0.0, p);
}

double SymmetricLaw::upper_tail_inverse(double tail) const {
  const double target = std::log(tail);
  const auto f = [&](double y) {
    const double t = y == 0.0 ? 0.5 : upper_tail(y);
    return t > 0.0 ? target - std::log(t) : kInf;
  };
  return increasing_root(f, 0.0, 1.0);
}

double StandardNormalLaw::log_pdf(double x) const { return sp::normal_log_pdf(x); }
double StandardNormalLaw::upper_tail(double y) const { return sp::normal_sf(y); }
double StandardNormalLaw::upper_tail_inverse(double tail) const { return -sp::normal_quantile(tail); }

ScaledStudentLaw::ScaledStudentLaw(double nu, double scale) : nu_(nu), scale_(scale) {
  if (!(nu > 0.0) || !(scale > 0.0)) throw DomainError("ScaledStudentLaw: nu and scale must be positive");
}

double ScaledStudentLaw::log_pdf(double x) const {
  return sp::student_t_log_pdf(nu_, x / scale_) - std::log(scale_);
}

double ScaledStudentLaw::upper_tail(double y) const { return sp::student_t_sf(nu_, y / scale_); }

double ScaledStudentLaw::upper_tail_inverse(double tail) const {
  return -scale_ * sp::student_t_quantile(nu_, tail);
}

std::string ScaledStudentLaw::name() const { return fmt(scale_) + "*t_" + fmt(nu_); }

// --- generalized hyperbolic -----------------------------------------------------

GeneralizedHyperbolicLaw::GeneralizedHyperbolicLaw(double lambda, double alpha, double delta)
    : lambda_(lambda), alpha_(alpha), delta_(std::max(delta, 1e-100)) {
  if (lambda != 0.5 && lambda != 1.0 && lambda != 1.5) {
    throw DomainError("GeneralizedHyperbolicLaw: lambda must be 1/2, 1 or 3/2");
  }
  if (!(alpha > 0.0) || !(delta >= 0.0)) throw DomainError("GeneralizedHyperbolicLaw: bad alpha or delta");
  log_norm_ = lambda_ * std::log(alpha_ / delta_) - sp::kLnSqrt2Pi -
              sp::log_bessel_k(lambda_, alpha_ * delta_) - (lambda_ - 0.5) * std::log(alpha_);
}

double GeneralizedHyperbolicLaw::log_pdf(double x) const {
  const double r = std::hypot(delta_, x);
  return log_norm_ + sp::log_bessel_k(lambda_ - 0.5, alpha_ * r) +
         (lambda_ - 0.5) * std::log(r);
}

double GeneralizedHyperbolicLaw::upper_tail(double y) const {
  // y = delta sinh(u): the integrand pdf(y) * r is smooth in u at every delta scale
  const double r0 = std::hypot(delta_, y);
  const double u0 = std::asinh(y / delta_);
  const double u_mid = std::acosh((r0 + 1.0 / alpha_) / delta_);
  const double u_end = std::acosh((r0 + 50.0 / alpha_) / delta_);
  const auto f = [this](double u) {
    const double t = delta_ * std::sinh(u);
    return std::exp(log_pdf(t)) * delta_ * std::cosh(u);
  };
  return numeric::integrate(f, u0, u_mid) + numeric::integrate(f, u_mid, u_end);
}

std::string GeneralizedHyperbolicLaw::name() const {
  return "GH(" + fmt(lambda_) + ", " + fmt(alpha_) + ", " + fmt(delta_) + ")";
}

// --- Laplace ------------------------------------------------------------------

LaplaceLaw::LaplaceLaw(double scale) : scale_(scale) {
  if (!(scale > 0.0)) throw DomainError("LaplaceLaw: scale must be positive");
}

double LaplaceLaw::log_pdf(double x) const { return -std::abs(x) / scale_ - std::log(2.0 * scale_); }
double LaplaceLaw::upper_tail(double y) const { return 0.5 * std::exp(-y / scale_); }
double LaplaceLaw::upper_tail_inverse(double tail) const { return -scale_ * std::log(2.0 * tail); }
std::string LaplaceLaw::name() const { return "Laplace(0, " + fmt(scale_) + ")"; }

// --- slash and extended slash ----------------------------------------------------

SlashLaw::SlashLaw(double q) : q_(q) {
  if (!(q > 0.0)) throw DomainError("SlashLaw: q must be positive");
  log_norm_ = std::log(q_ / (2.0 * sp::kSqrt2Pi));
}

double SlashLaw::log_pdf(double x) const {
  return log_norm_ + sp::log_scaled_lower_gamma(0.5 * (q_ + 1.0), 0.5 * x * x);
}

double SlashLaw::upper_tail(double y) const {
  // integration by parts of q int_0^1 t^{q-1} Phi^c(ty) dt
  return sp::normal_sf(y) + y * std::exp(log_pdf(y)) / q_;
}

std::string SlashLaw::name() const { return "SL(" + fmt(q_) + ")"; }

ExtendedSlashLaw::ExtendedSlashLaw(double a, double q) : a_(a), q_(q) {
  if (!(q > 0.0)) throw DomainError("ExtendedSlashLaw: q must be positive");
  log_den_ = -std::log(2.0 * sp::kSqrt2Pi) + sp::log_scaled_lower_gamma(0.5 * q_, 0.5 * a_ * a_);
}

double ExtendedSlashLaw::log_pdf(double x) const {
  const double c = 0.5 * (a_ * a_ + x * x);
  return -std::log(4.0 * sp::kPi) + sp::log_scaled_lower_gamma(0.5 * (q_ + 1.0), c) - log_den_;
}

double ExtendedSlashLaw::upper_tail(double y) const {
  // phi(ta) Phi^c(ty) is negligible once ta or ty passes 39
  const double reach = std::max(y, std::abs(a_));
  const double upper = reach > 39.0 ? 39.0 / reach : 1.0;
  const double log_den = log_den_;
  const auto f = [&](double t) {
    return std::exp((q_ - 1.0) * std::log(t) + sp::normal_log_pdf(t * a_) - log_den) * sp::normal_sf(t * y);
  };
  return numeric::integrate(f, 0.0, upper);
}

std::string ExtendedSlashLaw::name() const { return "ESL(" + fmt(a_) + ", " + fmt(q_) + ")"; }

// --- radial laws -----------------------------------------------------------------

RadialLaw::RadialLaw(std::string name, Fn log_pdf, Fn sf, Fn quantile)
    : name_(std::move(name)), log_pdf_(std::move(log_pdf)), sf_(std::move(sf)), quantile_(std::move(quantile)) {
  if (!quantile_) build_table();
}

double RadialLaw::log_pdf(double x) const { return x < 0.0 ? -kInf : log_pdf_(x); }

double RadialLaw::sf(double x) const {
  if (x <= 0.0) return 1.0;
  if (x == kInf) return 0.0;
  return std::clamp(sf_(x), 0.0, 1.0);
}

double RadialLaw::cdf(double x) const { return 1.0 - sf(x); }

double RadialLaw::prob(double lo, double hi) const {
  if (!(lo < hi)) return 0.0;
  return std::max(0.0, sf(lo) - sf(hi));
}

void RadialLaw::build_table() {
  double hi = 1.0;
  while (sf(hi) > 1e-9) hi *= 2.0;
  double lo = 1.0;
  while (cdf(lo) > 1e-9 && lo > 1e-300) lo *= 0.5;
  constexpr int kKnots = 2048;
  knots_.resize(kKnots);
  knot_cdf_.resize(kKnots);
  const double step = std::log(hi / lo) / (kKnots - 1);
  for (int k = 0; k < kKnots; ++k) {
    knots_[k] = lo * std::exp(step * k);
    knot_cdf_[k] = cdf(knots_[k]);
  }
}

double RadialLaw::quantile(double p) const {
  require_probability(p);
  if (quantile_) return quantile_(p);
  const auto it = std::lower_bound(knot_cdf_.begin(), knot_cdf_.end(), p);
  double lo = 0.0;
  double hi = 0.0;
  if (it == knot_cdf_.end()) {
    lo = knots_.back();
    hi = 2.0 * lo;
    while (cdf(hi) < p) hi *= 2.0;
  } else {
    const auto k = static_cast<std::size_t>(it - knot_cdf_.begin());
    hi = knots_[k];
    lo = k == 0 ? 0.0 : knots_[k - 1];
  }
  // residual in the tail that keeps full relative precision
  const auto f = [&](double x) { return p <= 0.5 ? cdf(x) - p : (1.0 - p) - sf(x); };
  return numeric::solve(f, lo, hi, f(lo), f(hi));
}

}  // namespace buls
