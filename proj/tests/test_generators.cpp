#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "buls/errors.hpp"
#include "buls/generators.hpp"
#include "buls/numeric.hpp"
#include "buls/specialfn.hpp"

using namespace buls;
namespace sp = buls::special;

namespace {

std::vector<Generator> all_generators() {
  return {Generator::normal(), Generator::student(7.0), Generator::student(1.5), Generator::hyperbolic(2.0),
          Generator::hyperbolic(0.6), Generator::laplace(), Generator::slash(3.0), Generator::slash(0.8)};
}

double total_mass(const UnivariateLaw& law) {
  const double lo = law.support_lo();
  const auto f = [&](double x) { return law.pdf(x); };
  if (lo == 0.0) return numeric::integrate_to_infinity(f, 0.0);
  return numeric::integrate_real_line(f);
}

}  // namespace

TEST_CASE("generator values") {
  CHECK(Generator::normal().g(0.0) == 1.0);
  CHECK(Generator::student(7.0).g(0.0) == 1.0);
  CHECK(std::abs(Generator::laplace().g(1.0) - 0.2391422107260811555) < 1e-14);
  CHECK(std::abs(Generator::hyperbolic(2.0).g(3.0) - std::exp(-4.0)) < 1e-15);
  // slash: x^{-(q+2)/2} gamma((q+2)/2, x/2)
  const double q = 3.0, x = 2.2;
  CHECK(std::abs(Generator::slash(q).g(x) - std::pow(x, -(q + 2) / 2) * sp::lower_inc_gamma((q + 2) / 2, x / 2)) < 1e-14);
  CHECK(std::isfinite(Generator::slash(q).log_g(0.0)));
  CHECK_THROWS_AS(Generator(Kind::StudentT), DomainError);
  CHECK_THROWS_AS(Generator(Kind::Normal, 2.0), DomainError);
  CHECK_THROWS_AS(Generator::slash(-1.0), DomainError);
  CHECK(parse_kind("Student") == Kind::StudentT);
  CHECK_THROWS_AS(parse_kind("cauchy"), DomainError);
}

TEST_CASE("partition functions") {
  CHECK(std::abs(Generator::normal().partition() - 2 * sp::kPi) < 1e-14);
  CHECK(std::abs(Generator::laplace().partition() - sp::kPi) < 1e-14);
  CHECK(std::abs(Generator::slash(2.0).partition() - sp::kPi / 2) < 1e-14);
  CHECK(std::abs(Generator::student(7.0).partition() - 2 * sp::kPi) < 1e-12);
  const double nu = 3.0;
  CHECK(std::abs(Generator::hyperbolic(nu).partition() - 2 * sp::kPi * (nu + 1) * std::exp(-nu) / (nu * nu)) < 1e-14);
}

TEST_CASE("partition normalizes the radial density") {
  for (const auto& gen : all_generators()) {
    CAPTURE(gen.label());
    const auto f = [&](double u) { return sp::kPi * gen.g(u) / gen.partition(); };
    const double mass = numeric::integrate_to_infinity(f, 0.0);
    CHECK(std::abs(mass - 1.0) < 1e-6);
  }
}

TEST_CASE("g_ratio closed forms and finite differences") {
  CHECK(Generator::normal().g_ratio(3.3) == -0.5);
  CHECK(Generator::student(2.0).g_ratio(0.0) == doctest::Approx(-1.0));
  CHECK(Generator::hyperbolic(3.0).g_ratio(0.0) == doctest::Approx(-1.5));
  CHECK_THROWS_AS(Generator::laplace().g_ratio(0.0), DomainError);
  for (const auto& gen : all_generators()) {
    CAPTURE(gen.label());
    for (double x = 0.01; x <= 50.0; x *= 1.5) {
      const double h = 1e-5 * x;
      const double fd = (gen.log_g(x + h) - gen.log_g(x - h)) / (2 * h);
      CHECK(std::abs(gen.g_ratio(x) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("Z marginal laws") {
  CHECK(std::abs(Generator::laplace().z_marginal()->pdf(0.0) - 1 / std::sqrt(2.0)) < 1e-15);
  const double q = 3.0;
  CHECK(std::abs(Generator::slash(q).z_marginal()->pdf(0.0) - q / ((q + 1) * sp::kSqrt2Pi)) < 1e-15);
  CHECK(std::abs(Generator::slash(q).z_marginal()->pdf(0.0) - 0.2992067103010745085) < 1e-15);
  CHECK(std::abs(Generator::hyperbolic(2.0).z_marginal()->pdf(0.0) - 0.4386211967520227969) < 1e-14);
  const double nu = 2.0;
  const double gh0 = std::pow(nu, 1.5) / (sp::kSqrt2Pi * sp::bessel_k(1.5, nu)) * sp::bessel_k(1.0, nu) / nu;
  CHECK(std::abs(Generator::hyperbolic(nu).z_marginal()->pdf(0.0) - gh0) < 1e-14);
}

TEST_CASE("univariate laws normalize and invert") {
  std::vector<LawPtr> laws;
  for (const auto& gen : all_generators()) {
    laws.push_back(gen.z_marginal());
    laws.push_back(gen.r2_law());
    for (double x : {-2.0, 0.0, 0.4, 3.0}) laws.push_back(gen.z2_given_z1(x));
  }
  for (const auto& law : laws) {
    CAPTURE(law->name());
    CHECK(std::abs(total_mass(*law) - 1.0) < 1e-6);
    for (double p : {1e-6, 0.01, 0.2, 0.5, 0.77, 0.99, 1 - 1e-6}) {
      const double x = law->quantile(p);
      CHECK(std::abs(law->cdf(x) - p) < 1e-6 * std::max(0.01, std::min(p, 1 - p)));
    }
    double prev = -1.0;
    for (double x = -6.0; x <= 6.0; x += 0.25) {
      const double c = law->cdf(x);
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("cdf matches integrated pdf") {
  for (const auto& gen : all_generators()) {
    for (const LawPtr& law : {gen.z_marginal(), gen.z2_given_z1(1.3), gen.r2_law()}) {
      CAPTURE(law->name());
      const auto pdf = [&](double t) { return law->pdf(t); };
      for (double x : {0.3, 1.7, 4.0}) {
        // mass above x by the tail integrator; subtract from one
        const double upper = numeric::integrate_to_infinity(pdf, x);
        const double direct = 1.0 - upper;
        CHECK(std::abs(law->cdf(x) - direct) < 1e-8);
      }
      CHECK(std::abs(law->prob(-0.5, 1.2) - (law->cdf(1.2) - law->cdf(-0.5))) < 1e-12);
    }
  }
}

TEST_CASE("conditional laws") {
  const auto t = Generator::student(7.0).z2_given_z1(0.0);
  CHECK(std::abs(t->pdf(0.0) - sp::student_t_pdf(8.0, 0.0) * std::sqrt(8.0 / 7.0)) < 1e-14);
  CHECK(Generator::normal().z2_given_z1(5.0)->pdf(0.3) == sp::normal_pdf(0.3));

  // ESL(a=1, Q=3) at 0.5 against quadrature of the defining integrals
  const auto esl = Generator::slash(2.0).z2_given_z1(1.0);
  CHECK(std::abs(esl->pdf(0.5) - 0.2669124402736338145) < 1e-14);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (double a : {0.0, 0.7, 2.5}) {
    for (double y : {0.0, 0.5, 3.0}) {
      const double qq = 3.5;
      const double num = GK::integrate([&](double s) { return std::pow(s, qq) * sp::normal_pdf(s * a) * sp::normal_pdf(s * y); }, 0.0, 1.0, 0);
      const double den = GK::integrate([&](double u) { return std::pow(u, qq - 1) * sp::normal_pdf(u * a); }, 0.0, 1.0, 0);
      CHECK(std::abs(ExtendedSlashLaw(a, qq).pdf(y) - num / den) < 1e-12);
    }
  }

  // Laplace conditional is defined down to x = 0 through the delta floor
  CHECK(std::isfinite(Generator::laplace().z2_given_z1(0.0)->cdf(0.8)));
}

TEST_CASE("tower property of the Z conditionals") {
  for (const auto& gen : all_generators()) {
    CAPTURE(gen.label());
    for (double y : {-1.0, 0.0, 0.7}) {
      const auto f = [&](double x) { return gen.z2_given_z1(x)->pdf(y) * gen.z_marginal()->pdf(x); };
      const double mixed = numeric::integrate_real_line(f, 0.0, 1.0, {1e-9, 20, 1e-5});
      CHECK(std::abs(mixed - gen.z_marginal()->pdf(y)) < 1e-4);
    }
  }
}

TEST_CASE("R^2 laws") {
  const auto chi = Generator::normal().r2_law();
  CHECK(std::abs(chi->cdf(1.7) - (1 - std::exp(-0.85))) < 1e-15);
  CHECK(std::abs(chi->quantile(0.3) + 2 * std::log(0.7)) < 1e-14);
  CHECK(std::abs(Generator::student(5.0).r2_law()->quantile(0.5) - 1.597539553864471297) < 1e-13);
  for (const auto& gen : all_generators()) CHECK(gen.r2_law()->cdf(0.0) == 0.0);
}
