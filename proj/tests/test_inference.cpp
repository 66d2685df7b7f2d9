#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "buls/datasets.hpp"
#include "buls/errors.hpp"
#include "buls/inference.hpp"
#include "buls/sampling.hpp"

using namespace buls;

namespace {

std::vector<Generator> gens() {
  return {Generator::normal(), Generator::student(7.0), Generator::hyperbolic(2.0), Generator::laplace(),
          Generator::slash(4.0)};
}

const ModelParams kNormalTable{0.5288, 0.3414, 0.8865, 1.1355, 0.4956};

}  // namespace

TEST_CASE("log-likelihood as a sum of point densities") {
  RandomSource rng(3);
  const ModelParams th{0.7, 1.2, 0.8, 0.5, -0.3};
  for (const auto& gen : gens()) {
    CAPTURE(gen.label());
    const auto data = sample_buls(gen, th, 50, rng);
    double latent = 0.0, unit = 0.0;
    for (const auto& r : data.rows) {
      latent += latent_logpdf(gen, th, r);
      unit += joint_logpdf(gen, th, r);
    }
    CHECK(std::abs(loglik(gen, th, data) - latent) < 1e-10);
    CHECK(std::abs(loglik_unit(gen, th, data) - unit) < 1e-10);
    BivariateDataset one;
    one.rows = {data.rows[0]};
    CHECK(std::abs(loglik_unit(gen, th, one) - joint_logpdf(gen, th, data.rows[0])) < 1e-12);
  }
}

TEST_CASE("log-likelihood on the UEFA data") {
  const auto uefa = datasets::uefa();
  CHECK(std::abs(loglik(Generator::normal(), kNormalTable, uefa) - (-36.693)) < 0.01);
  CHECK(std::abs(loglik(Generator::student(7.0), {0.5541, 0.3783, 0.7431, 0.9734, 0.4723}, uefa) - (-35.487)) < 0.01);
}

TEST_CASE("non-finite terms name the row") {
  const auto uefa = datasets::uefa();
  // the Laplace generator is infinite at the centre
  const auto& r = uefa.rows[8];
  const ModelParams spike{r.t(1), r.t(2), 1.0, 1.0, 0.5};
  try {
    (void)loglik(Generator::laplace(), spike, uefa);
    FAIL("expected NonFiniteLikelihood");
  } catch (const NonFiniteLikelihood& e) {
    CHECK(e.row() == 8);
  }
}

TEST_CASE("score matches centred differences") {
  std::mt19937_64 mt(4);
  std::uniform_real_distribution<double> eta(0.3, 2.0), sig(0.3, 1.5), rho(-0.8, 0.8);
  for (const auto& gen : gens()) {
    CAPTURE(gen.label());
    RandomSource rng(5);
    const auto data = sample_buls(gen, {1.0, 0.8, 0.7, 0.9, 0.4}, 200, rng);
    const PreparedData prepared(data);
    for (int k = 0; k < 20; ++k) {
      const ModelParams th{eta(mt), eta(mt), sig(mt), sig(mt), rho(mt)};
      const auto s = score(gen, th, prepared);
      auto x = th.to_array();
      for (int i = 0; i < 5; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        auto up = x, dn = x;
        up[i] += h;
        dn[i] -= h;
        const double fd = (loglik(gen, ModelParams::from_array(up), prepared) -
                           loglik(gen, ModelParams::from_array(dn), prepared)) /
                          (2 * h);
        CHECK(std::abs(s[i] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("rho score sign on symmetric data") {
  // rows with equal standardized coordinates: the rho derivative at 0 is sum z1 z2 / 1 > 0
  BivariateDataset d;
  for (double w : {0.1, 0.3, 0.5, 0.7, 0.9}) d.rows.push_back(UnitPoint::from_unit(w, w));
  const ModelParams th{0.6, 0.6, 1.0, 1.0, 0.0};
  double s = 0.0;
  for (const auto& r : d.rows) {
    const double z = std::log(r.t(1) / 0.6);
    s += z * z;
  }
  CHECK(std::abs(score(Generator::normal(), th, d)[4] - s) < 1e-12);
}

TEST_CASE("fit on the bundled data") {
  const auto r = fit(Generator::normal(), datasets::uefa());
  CHECK(r.converged);
  CHECK(r.score_norm < 1e-4);
  const std::array<double, 5> expect{0.5288, 0.3414, 0.8865, 1.1355, 0.4956};
  const std::array<double, 5> se{0.0771, 0.0637, 0.1031, 0.1320, 0.1240};
  const auto got = r.theta_hat.to_array();
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(got[i] - expect[i]) < 1e-3);
    CHECK(std::abs(r.se[i] - se[i]) < 0.15 * se[i]);
  }
  CHECK(std::abs(r.loglik - (-36.693)) < 0.01);
  CHECK(std::abs(r.aic - (-2 * r.loglik + 10)) < 1e-12);
  CHECK(std::abs(r.bic - (-2 * r.loglik + 5 * std::log(37.0))) < 1e-12);

  const auto f = fit(Generator::normal(), datasets::fifa());
  const std::array<double, 5> fexp{1.9872, 0.7953, 0.1364, 0.2089, 0.7343};
  const auto fgot = f.theta_hat.to_array();
  for (int i = 0; i < 5; ++i) CHECK(std::abs(fgot[i] - fexp[i]) < 0.01);
}

TEST_CASE("fit never ends below its start") {
  for (const auto& gen : gens()) {
    CAPTURE(gen.label());
    const auto data = datasets::fifa();
    const auto r = fit(gen, data);
    const double start = loglik(gen, moment_start(PreparedData(data)), data);
    CHECK(r.loglik >= start);
    CHECK_NOTHROW(r.theta_hat.validate());
    if (r.converged) CHECK(r.score_norm < 1e-4);
  }
}

TEST_CASE("fit recovers simulated parameters") {
  const ModelParams truth{0.8, 1.4, 0.6, 0.9, 0.35};
  for (const auto& gen : {Generator::normal(), Generator::student(5.0), Generator::slash(3.0)}) {
    CAPTURE(gen.label());
    RandomSource rng(6);
    const auto data = sample_buls(gen, truth, 5000, rng);
    const auto r = fit(gen, data);
    CHECK(r.converged);
    const auto got = r.theta_hat.to_array();
    const auto want = truth.to_array();
    for (int i = 0; i < 5; ++i) CHECK(std::abs(got[i] - want[i]) < 3 * r.se[i]);
  }
}

TEST_CASE("fit is deterministic and validates its input") {
  const auto a = fit(Generator::student(4.0), datasets::uefa());
  const auto b = fit(Generator::student(4.0), datasets::uefa());
  CHECK(a.theta_hat.to_array() == b.theta_hat.to_array());
  CHECK(a.loglik == b.loglik);
  BivariateDataset tiny;
  for (int i = 0; i < 5; ++i) tiny.rows.push_back(UnitPoint::from_unit(0.1 * (i + 1), 0.5));
  CHECK_THROWS_AS(fit(Generator::normal(), tiny), DataError);
  CHECK(to_free(from_free({0.1, -0.2, 0.3, -0.4, 0.5}))[4] == doctest::Approx(0.5));
}

TEST_CASE("profile likelihood over shapes") {
  const auto uefa = datasets::uefa();
  const auto t = profile_fit(Kind::StudentT, uefa, default_shape_grid());
  CHECK(t.shape == 7.0);
  CHECK(std::abs(t.best.loglik - (-35.487)) < 0.01);
  const auto h = profile_fit(Kind::Hyperbolic, uefa, default_shape_grid());
  CHECK(h.shape == 2.0);
  CHECK(std::abs(h.best.loglik - (-35.470)) < 0.01);
  CHECK(t.entries.size() == 30);
  for (std::size_t i = 0; i < t.entries.size(); ++i) CHECK(t.entries[i].shape == static_cast<double>(i + 1));
  CHECK_THROWS_AS(profile_fit(Kind::Normal, uefa, {1.0}), DomainError);
  CHECK_THROWS_AS(profile_fit(Kind::Slash, uefa, {}), DomainError);
}

TEST_CASE("rho likelihood equation has a root") {
  RandomSource rng(8);
  const auto data = sample_buls(Generator::normal(), {1, 1, 0.5, 0.5, 0.5}, 500, rng);
  const auto b = rho_root_exists(Generator::normal(), data, 1, 1, 0.5, 0.5);
  CHECK(b.found);
  CHECK(b.lo <= b.root);
  CHECK(b.root <= b.hi);
  CHECK(std::abs(b.root - 0.5) < 0.1);

  const auto u = rho_root_exists(Generator::student(7.0), datasets::uefa(), 0.5541, 0.3783, 0.7431, 0.9734);
  CHECK(u.found);
  CHECK(std::abs(u.root - 0.4723) < 0.01);

  BivariateDataset one;
  one.rows = {UnitPoint::from_unit(0.3, 0.6)};
  CHECK_NOTHROW(rho_root_exists(Generator::normal(), one, 1, 1, 1, 1));
}
