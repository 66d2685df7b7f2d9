#include "buls/core.hpp"

#include <cmath>
#include <limits>

#include "buls/errors.hpp"
#include "buls/numeric.hpp"
#include "buls/specialfn.hpp"

namespace buls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_index(int i) {
  if (i != 1 && i != 2) throw DomainError("margin index must be 1 or 2");
}

void check_unit(double w) {
  if (!(w > 0.0 && w < 1.0)) throw DomainError("value must lie strictly inside (0, 1)");
}

// Standardized coordinate of an interval endpoint, with the open ends sent to +-inf.
double endpoint(double w, double eta, double sigma) {
  if (w <= 0.0) return -kInf;
  if (w >= 1.0) return kInf;
  return standardize(latent_of(w), eta, sigma);
}

}  // namespace

void ModelParams::validate() const {
  const bool ok = eta1 > 0.0 && eta2 > 0.0 && sigma1 > 0.0 && sigma2 > 0.0 && std::isfinite(eta1) &&
                  std::isfinite(eta2) && std::isfinite(sigma1) && std::isfinite(sigma2) && rho > -1.0 && rho < 1.0;
  if (!ok) throw DomainError("parameters must satisfy eta > 0, sigma > 0, |rho| < 1");
}

double ModelParams::mu(int i) const {
  check_index(i);
  return std::log(eta(i));
}

UnitPoint UnitPoint::from_unit(double w1, double w2) {
  check_unit(w1);
  check_unit(w2);
  UnitPoint p;
  p.w_ = {w1, w2};
  p.t_ = {latent_of(w1), latent_of(w2)};
  return p;
}

UnitPoint UnitPoint::from_latent(double t1, double t2) {
  if (!(t1 > 0.0 && t2 > 0.0 && std::isfinite(t1) && std::isfinite(t2))) {
    throw DomainError("latent coordinates must be positive and finite");
  }
  UnitPoint p;
  p.t_ = {t1, t2};
  p.w_ = {-std::expm1(-t1), -std::expm1(-t2)};
  return p;
}

void Interval::validate() const {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw DomainError("interval must satisfy 0 <= lo < hi <= 1");
}

double latent_of(double w) {
  check_unit(w);
  return -std::log1p(-w);
}

double standardize(double t, double eta, double sigma) { return (std::log(t) - std::log(eta)) / sigma; }

double quadratic_form(double rho, double z1, double z2) {
  return (z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) / (1.0 - rho * rho);
}

double latent_logpdf(const Generator& gen, const ModelParams& theta, const UnitPoint& p) {
  theta.validate();
  const double t1 = p.t(1);
  const double t2 = p.t(2);
  const double z1 = standardize(t1, theta.eta1, theta.sigma1);
  const double z2 = standardize(t2, theta.eta2, theta.sigma2);
  const double q = quadratic_form(theta.rho, z1, z2);
  return -std::log(t1) - std::log(t2) - std::log(theta.sigma1) - std::log(theta.sigma2) -
         0.5 * std::log1p(-theta.rho * theta.rho) - gen.log_partition() + gen.log_g(q);
}

double joint_logpdf(const Generator& gen, const ModelParams& theta, const UnitPoint& p) {
  // the Jacobian of w -> t is 1/(1-w) = e^t
  return latent_logpdf(gen, theta, p) + p.t(1) + p.t(2);
}

double joint_pdf(const Generator& gen, const ModelParams& theta, const UnitPoint& p) {
  return std::exp(joint_logpdf(gen, theta, p));
}

namespace {

double marginal_logpdf_latent(const Generator& gen, const ModelParams& theta, int i, double t) {
  const double z = standardize(t, theta.eta(i), theta.sigma(i));
  return gen.z_marginal()->log_pdf(z) + t - std::log(t) - std::log(theta.sigma(i));
}

}  // namespace

double marginal_logpdf(const Generator& gen, const ModelParams& theta, int i, double w) {
  check_index(i);
  theta.validate();
  return marginal_logpdf_latent(gen, theta, i, latent_of(w));
}

double marginal_pdf(const Generator& gen, const ModelParams& theta, int i, double w) {
  return std::exp(marginal_logpdf(gen, theta, i, w));
}

double marginal_cdf(const Generator& gen, const ModelParams& theta, int i, double w) {
  check_index(i);
  theta.validate();
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  return gen.z_marginal()->cdf(standardize(latent_of(w), theta.eta(i), theta.sigma(i)));
}

double marginal_quantile(const Generator& gen, const ModelParams& theta, int i, double p) {
  check_index(i);
  theta.validate();
  if (!(p > 0.0 && p < 1.0)) throw DomainError("marginal_quantile: p must lie in (0, 1)");
  const double t = theta.eta(i) * std::exp(theta.sigma(i) * gen.z_marginal()->quantile(p));
  return -std::expm1(-t);
}

double joint_cdf(const Generator& gen, const ModelParams& theta, const UnitPoint& p) {
  theta.validate();
  const double a = standardize(p.t(1), theta.eta1, theta.sigma1);
  const double b = standardize(p.t(2), theta.eta2, theta.sigma2);
  const double rho = theta.rho;
  if (gen.kind() == Kind::Normal) {
    const double base = special::normal_cdf(a) * special::normal_cdf(b);
    if (rho == 0.0) return base;
    const auto f = [&](double angle) {
      const double s = std::sin(angle);
      const double c2 = 1.0 - s * s;
      return std::exp(-(a * a + b * b - 2.0 * a * b * s) / (2.0 * c2));
    };
    return base + numeric::integrate(f, 0.0, std::asin(rho), {1e-12, 20, 1e-9}) / (2.0 * special::kPi);
  }
  const double s = std::sqrt(1.0 - rho * rho);
  const auto& marginal = *gen.z_marginal();
  const auto h = [&](double z) {
    const double dens = marginal.pdf(z);
    if (dens < 1e-300) return 0.0;
    return dens * gen.z2_given_z1(z)->cdf((b - rho * z) / s);
  };
  const numeric::QuadOptions opts{1e-9, 20, 1e-7};
  // split at the symmetry point, where Laplace-type integrands have a kink
  const double split = std::min(a, 0.0);
  const double left = numeric::integrate_to_infinity([&](double u) { return h(split - u); }, 0.0, 1.0, opts);
  if (a <= 0.0) return left;
  // the marginals are symmetric; past this point less than 1e-17 of mass remains
  const double reach = a > 8.0 ? -marginal.quantile(1e-17) : a;
  return left + numeric::integrate(h, 0.0, std::min(a, reach), opts);
}

double cond_logpdf_w2_given_w1(const Generator& gen, const ModelParams& theta, const UnitPoint& p) {
  theta.validate();
  const double t2 = p.t(2);
  const double z1 = standardize(p.t(1), theta.eta1, theta.sigma1);
  const double z2 = standardize(t2, theta.eta2, theta.sigma2);
  const double s = std::sqrt(1.0 - theta.rho * theta.rho);
  const double y = (z2 - theta.rho * z1) / s;
  return gen.z2_given_z1(z1)->log_pdf(y) + t2 - std::log(t2) - std::log(theta.sigma2) - std::log(s);
}

double cond_pdf_w2_given_w1(const Generator& gen, const ModelParams& theta, double w1, double w2) {
  return std::exp(cond_logpdf_w2_given_w1(gen, theta, UnitPoint::from_unit(w1, w2)));
}

double cond_logpdf_w1_given_w2_in(const Generator& gen, const ModelParams& theta, double t1, const Interval& b) {
  theta.validate();
  b.validate();
  if (!(t1 > 0.0 && std::isfinite(t1))) throw DomainError("latent coordinate must be positive and finite");
  const double z1 = standardize(t1, theta.eta1, theta.sigma1);
  const double lo = endpoint(b.lo, theta.eta2, theta.sigma2);
  const double hi = endpoint(b.hi, theta.eta2, theta.sigma2);
  const double denom = gen.z_marginal()->prob(lo, hi);
  if (!(denom >= 1e-300)) throw DomainError("conditioning event has negligible mass");
  const double s = std::sqrt(1.0 - theta.rho * theta.rho);
  const double num = gen.z2_given_z1(z1)->prob((lo - theta.rho * z1) / s, (hi - theta.rho * z1) / s);
  return marginal_logpdf_latent(gen, theta, 1, t1) + std::log(num) - std::log(denom);
}

double cond_pdf_w1_given_w2_in(const Generator& gen, const ModelParams& theta, double w1, const Interval& b) {
  return std::exp(cond_logpdf_w1_given_w2_in(gen, theta, latent_of(w1), b));
}

double mahalanobis_sq(const ModelParams& theta, const UnitPoint& p) {
  theta.validate();
  const double z1 = standardize(p.t(1), theta.eta1, theta.sigma1);
  const double z2 = standardize(p.t(2), theta.eta2, theta.sigma2);
  return quadratic_form(theta.rho, z1, z2);
}

double maha_pdf(const Generator& gen, double x) {
  if (!(x > 0.0)) throw DomainError("maha_pdf: x must be positive");
  return gen.r2_law()->pdf(x);
}

double maha_cdf(const Generator& gen, double x) { return gen.r2_law()->cdf(x); }

double maha_quantile(const Generator& gen, double p) { return gen.r2_law()->quantile(p); }

double moment(const Generator& gen, const ModelParams& theta, int i, double r) {
  check_index(i);
  theta.validate();
  if (r == 0.0) return 1.0;
  const double eta = theta.eta(i);
  const double sigma = theta.sigma(i);
  if (r < 0.0) {
    // W^r grows like exp(|r| sigma |z|) as z -> -inf; compare with the tail decay of Z
    const double growth = -r * sigma;
    bool diverges = false;
    switch (gen.kind()) {
      case Kind::Normal: break;
      case Kind::StudentT:
      case Kind::Slash: diverges = true; break;
      case Kind::Laplace: diverges = growth >= special::kSqrt2; break;
      case Kind::Hyperbolic: diverges = growth >= gen.shape_or_zero(); break;
    }
    if (diverges) {
      throw DivergenceError("E(W^" + std::to_string(r) + ") is infinite for the " + gen.label() +
                            " generator at sigma=" + std::to_string(sigma));
    }
  }
  const auto& law = *gen.z_marginal();
  const auto f = [&](double z) {
    const double log_w = std::log(-std::expm1(-eta * std::exp(sigma * z)));
    return std::exp(r * log_w + law.log_pdf(z));
  };
  return numeric::integrate_real_line(f, 0.0, 1.0, {1e-11, 20, 1e-8});
}

}  // namespace buls
