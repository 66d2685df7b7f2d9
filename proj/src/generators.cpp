#include "buls/generators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>

#include "buls/errors.hpp"
#include "buls/specialfn.hpp"

namespace buls {
namespace sp = special;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Kind parse_kind(const std::string& text) {
  const std::string t = lower(text);
  if (t == "normal" || t == "gaussian") return Kind::Normal;
  if (t == "student" || t == "student-t" || t == "t") return Kind::StudentT;
  if (t == "hyperbolic") return Kind::Hyperbolic;
  if (t == "laplace") return Kind::Laplace;
  if (t == "slash") return Kind::Slash;
  throw DomainError("unknown model '" + text + "'");
}

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::Normal: return "normal";
    case Kind::StudentT: return "student";
    case Kind::Hyperbolic: return "hyperbolic";
    case Kind::Laplace: return "laplace";
    case Kind::Slash: return "slash";
  }
  return "unknown";
}

bool kind_has_shape(Kind kind) {
  return kind == Kind::StudentT || kind == Kind::Hyperbolic || kind == Kind::Slash;
}

Generator::Generator(Kind kind, std::optional<double> shape) : kind_(kind), shape_(shape) {
  if (kind_has_shape(kind) != shape.has_value()) {
    throw DomainError("generator " + kind_name(kind) +
                      (kind_has_shape(kind) ? " requires a shape parameter" : " takes no shape parameter"));
  }
  if (shape && !(*shape > 0.0 && std::isfinite(*shape))) {
    throw DomainError("generator shape must be positive");
  }
  const double v = shape_or_zero();
  switch (kind_) {
    case Kind::Normal:
      log_partition_ = std::log(2.0 * sp::kPi);
      z_marginal_ = std::make_shared<StandardNormalLaw>();
      r2_law_ = std::make_shared<RadialLaw>(
          "chi2_2", [](double x) { return -0.5 * x - std::log(2.0); },
          [](double x) { return std::exp(-0.5 * x); }, [](double p) { return -2.0 * std::log1p(-p); });
      break;
    case Kind::StudentT:
      log_partition_ = sp::ln_gamma(0.5 * v) + std::log(v * sp::kPi) - sp::ln_gamma(0.5 * (v + 2.0));
      z_marginal_ = std::make_shared<ScaledStudentLaw>(v, 1.0);
      r2_law_ = std::make_shared<RadialLaw>(
          "2F(2," + std::to_string(v) + ")",
          [v](double x) { return -std::log(2.0) - 0.5 * (v + 2.0) * std::log1p(x / v); },
          [v](double x) { return std::exp(-0.5 * v * std::log1p(x / v)); },
          [v](double p) { return v * std::expm1(-(2.0 / v) * std::log1p(-p)); });
      break;
    case Kind::Hyperbolic:
      log_partition_ = std::log(2.0 * sp::kPi) + std::log(v + 1.0) - v - 2.0 * std::log(v);
      z_marginal_ = std::make_shared<GeneralizedHyperbolicLaw>(1.5, v, 1.0);
      break;
    case Kind::Laplace:
      log_partition_ = std::log(sp::kPi);
      z_marginal_ = std::make_shared<LaplaceLaw>(1.0 / sp::kSqrt2);
      break;
    case Kind::Slash:
      log_partition_ = std::log(sp::kPi / v) + 0.5 * (2.0 - v) * std::log(2.0);
      z_marginal_ = std::make_shared<SlashLaw>(v);
      break;
  }
  if (!r2_law_) {
    // pdf pi g(x) / Z with a closed-form survival function
    const double log_pi_over_z = std::log(sp::kPi) - log_partition_;
    const Generator self = *this;
    const auto log_pdf = [self, log_pi_over_z](double x) { return log_pi_over_z + self.log_g(x); };
    RadialLaw::Fn sf;
    if (kind_ == Kind::Hyperbolic) {
      sf = [v](double x) {
        const double s = std::sqrt(1.0 + x);
        return std::exp(-v * (s - 1.0)) * (v * s + 1.0) / (v + 1.0);
      };
    } else if (kind_ == Kind::Laplace) {
      sf = [](double x) {
        const double s = std::sqrt(2.0 * x);
        return s * sp::bessel_k_scaled(1.0, s) * std::exp(-s);
      };
    } else {
      sf = [v](double x) { return 0.5 * v * sp::scaled_lower_gamma(0.5 * v, 0.5 * x); };
    }
    r2_law_ = std::make_shared<RadialLaw>("R2[" + label() + "]", log_pdf, sf);
  }
}

std::string Generator::label() const {
  if (!shape_) return kind_name(kind_);
  std::string s = std::to_string(*shape_);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return kind_name(kind_) + "(" + s + ")";
}

double Generator::log_g(double x) const {
  if (!(x >= 0.0)) throw DomainError("generator argument must be nonnegative");
  const double v = shape_or_zero();
  switch (kind_) {
    case Kind::Normal: return -0.5 * x;
    case Kind::StudentT: return -0.5 * (v + 2.0) * std::log1p(x / v);
    case Kind::Hyperbolic: return -v * std::sqrt(1.0 + x);
    case Kind::Laplace: return x == 0.0 ? kInf : sp::log_bessel_k(0.0, std::sqrt(2.0 * x));
    case Kind::Slash: {
      const double s = 0.5 * (v + 2.0);
      return -s * std::log(2.0) + sp::log_scaled_lower_gamma(s, 0.5 * x);
    }
  }
  return 0.0;
}

double Generator::g(double x) const { return std::exp(log_g(x)); }

double Generator::g_ratio(double x) const {
  if (!(x >= 0.0)) throw DomainError("generator argument must be nonnegative");
  const double v = shape_or_zero();
  switch (kind_) {
    case Kind::Normal: return -0.5;
    case Kind::StudentT: return -(v + 2.0) / (2.0 * (v + x));
    case Kind::Hyperbolic: return -v / (2.0 * std::sqrt(1.0 + x));
    case Kind::Laplace: {
      if (x == 0.0) throw DomainError("Laplace g_ratio is singular at 0");
      const double s = std::sqrt(2.0 * x);
      return -sp::bessel_k_scaled(1.0, s) / (s * sp::bessel_k_scaled(0.0, s));
    }
    case Kind::Slash: return 0.5 * sp::dlog_scaled_lower_gamma(0.5 * (v + 2.0), 0.5 * x);
  }
  return 0.0;
}

double Generator::partition() const { return std::exp(log_partition_); }

LawPtr Generator::z2_given_z1(double x) const {
  const double v = shape_or_zero();
  switch (kind_) {
    case Kind::Normal: return z_marginal_;
    case Kind::StudentT: return std::make_shared<ScaledStudentLaw>(v + 1.0, std::sqrt((v + x * x) / (v + 1.0)));
    case Kind::Hyperbolic: return std::make_shared<GeneralizedHyperbolicLaw>(1.0, v, std::sqrt(1.0 + x * x));
    case Kind::Laplace: return std::make_shared<GeneralizedHyperbolicLaw>(0.5, sp::kSqrt2, std::abs(x));
    case Kind::Slash: return std::make_shared<ExtendedSlashLaw>(x, v + 1.0);
  }
  return z_marginal_;
}

}  // namespace buls
