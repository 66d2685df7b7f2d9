#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "buls/datasets.hpp"
#include "buls/errors.hpp"
#include "buls/experiments.hpp"
#include "buls/gof.hpp"
#include "buls/sampling.hpp"

using namespace buls;

namespace {

void check_column(const ColumnSummary& s, double mn, double med, double mean, double mx, double sd, double cv,
                  double cs, double ck) {
  CHECK(std::abs(s.min - mn) < 0.0005 + 1e-12);
  CHECK(std::abs(s.median - med) < 0.005);
  CHECK(std::abs(s.mean - mean) < 0.005);
  CHECK(std::abs(s.max - mx) < 0.0005 + 1e-12);
  CHECK(std::abs(s.sd - sd) < 0.005);
  CHECK(std::abs(s.cv - cv) < 0.05);
  REQUIRE(s.cs);
  REQUIRE(s.ck);
  CHECK(std::abs(*s.cs - cs) < 0.05);
  CHECK(std::abs(*s.ck - ck) < 0.05);
}

}  // namespace

TEST_CASE("summary statistics of the bundled data") {
  const auto u = describe(datasets::uefa_table());
  CHECK(u.w1.n == 37);
  check_column(u.w1, 0.022, 0.456, 0.454, 0.911, 0.224, 49.274, 0.164, -0.930);
  check_column(u.w2, 0.022, 0.311, 0.365, 0.944, 0.254, 69.475, 0.522, -0.839);

  const auto f = describe(datasets::fifa());
  CHECK(f.w1.n == 32);
  check_column(f.w1, 0.769, 0.860, 0.860, 0.931, 0.038, 4.376, -0.373, -0.194);
  check_column(f.w2, 0.427, 0.556, 0.550, 0.751, 0.075, 13.713, 0.308, -0.425);
}

TEST_CASE("moment conventions") {
  const std::vector<double> v{0.1, 0.2, 0.25, 0.4, 0.8, 0.9};
  const auto b = describe_column(v, MomentConvention::SampleSd);
  const auto g = describe_column(v, MomentConvention::Population);
  const auto G = describe_column(v, MomentConvention::Adjusted);
  const double n = 6.0;
  // b1 = g1 ((n-1)/n)^1.5, G1 = g1 sqrt(n(n-1))/(n-2)
  CHECK(*b.cs == doctest::Approx(*g.cs * std::pow((n - 1) / n, 1.5)).epsilon(1e-12));
  CHECK(*G.cs == doctest::Approx(*g.cs * std::sqrt(n * (n - 1)) / (n - 2)).epsilon(1e-12));
  CHECK(*b.ck + 3 == doctest::Approx((*g.ck + 3) * std::pow((n - 1) / n, 2)).epsilon(1e-12));
  CHECK(parse_moment_convention("G") == MomentConvention::Adjusted);
  CHECK_THROWS_AS(parse_moment_convention("x"), DomainError);
}

TEST_CASE("degenerate and permuted columns") {
  const auto c = describe_column({0.3, 0.3, 0.3, 0.3});
  CHECK(c.sd == 0.0);
  CHECK(c.cv == 0.0);
  CHECK_FALSE(c.cs.has_value());
  CHECK_FALSE(c.ck.has_value());
  CHECK_THROWS_AS(describe_column({0.5}), DataError);

  auto data = datasets::fifa();
  const auto a = describe(data);
  std::reverse(data.rows.begin(), data.rows.end());
  std::rotate(data.rows.begin(), data.rows.begin() + 7, data.rows.end());
  const auto b = describe(data);
  CHECK(a.w2.mean == b.w2.mean);
  CHECK(a.w2.sd == b.w2.sd);
  CHECK(*a.w2.cs == *b.w2.cs);
  CHECK(*a.w1.ck == *b.w1.ck);
}

TEST_CASE("Monte Carlo study bookkeeping") {
  MCConfig cfg;
  cfg.theta_true = {1.0, 1.0, 0.5, 0.5, 0.5};
  cfg.sample_sizes = {30, 200};
  cfg.replications = 40;
  cfg.base_seed = 11;
  const auto r = mc_study(cfg);
  REQUIRE(r.cells.size() == 2);
  for (const auto& c : r.cells) {
    CHECK(c.used + c.failed == 40);
    for (const auto& p : c.params) {
      CHECK(p.rmse >= std::abs(p.bias));
      CHECK(p.cp >= 0.0);
      CHECK(p.cp <= 1.0);
      CHECK(p.cp_se >= 0.0);
    }
  }
  for (int j = 0; j < 5; ++j) CHECK(r.cells[1].params[j].rmse < r.cells[0].params[j].rmse);

  const auto again = mc_study(cfg);
  for (std::size_t k = 0; k < 2; ++k) {
    for (int j = 0; j < 5; ++j) {
      CHECK(again.cells[k].params[j].bias == r.cells[k].params[j].bias);
      CHECK(again.cells[k].params[j].cp == r.cells[k].params[j].cp);
    }
  }

  cfg.replications = 1;
  cfg.sample_sizes = {50};
  const auto one = mc_study(cfg);
  for (const auto& p : one.cells[0].params) CHECK(p.rmse == std::abs(p.bias));

  cfg.sample_sizes = {5};
  CHECK_THROWS_AS(mc_study(cfg), DomainError);
  CHECK(replication_seed(7, 25, 3) != replication_seed(7, 100, 3));
}

TEST_CASE("Monte Carlo study aborts when fits keep failing") {
  MCConfig cfg;
  cfg.theta_true = {1.0, 1.0, 0.5, 0.5, 0.5};
  cfg.sample_sizes = {20};
  cfg.replications = 10;
  cfg.max_failure_rate = 0.2;
  cfg.fit.max_evaluations = 10;
  CHECK_THROWS_AS(mc_study(cfg), StudyAborted);
}

TEST_CASE("QQ series") {
  const ModelParams th{0.5288, 0.3414, 0.8865, 1.1355, 0.4956};
  const auto qq = qq_data(Generator::normal(), th, datasets::uefa());
  REQUIRE(qq.pairs.size() == 37);
  for (std::size_t i = 1; i < qq.pairs.size(); ++i) {
    CHECK(qq.pairs[i].first >= qq.pairs[i - 1].first);
    CHECK(qq.pairs[i].second >= qq.pairs[i - 1].second);
  }
  CHECK(max_studentized_residual(qq) > 2.0);

  BivariateDataset one;
  one.rows = {UnitPoint::from_unit(0.4, 0.6)};
  const auto single = qq_data(Generator::normal(), th, one);
  REQUIRE(single.pairs.size() == 1);
  CHECK(single.pairs[0].first == doctest::Approx(2 * std::log(2.0)).epsilon(1e-9));

  RandomSource rng(12);
  const ModelParams truth{1.0, 1.0, 0.7, 0.7, 0.4};
  const auto sim = qq_data(Generator::normal(), truth, sample_buls(Generator::normal(), truth, 5000, rng));
  std::vector<double> x, y;
  for (const auto& [a, b] : sim.pairs) {
    x.push_back(a);
    y.push_back(b);
  }
  CHECK(gof::pearson(x, y) > 0.99);
}
