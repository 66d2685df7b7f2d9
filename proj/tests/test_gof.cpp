#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "buls/errors.hpp"
#include "buls/gof.hpp"

using namespace buls;

TEST_CASE("one-sample KS statistic") {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(std::abs(gof::ks_statistic({0.9, 0.1, 0.5}, uniform) - (0.7 / 3.0)) < 1e-15);
  CHECK(gof::ks_statistic({0.5}, uniform) == 0.5);
  CHECK_THROWS_AS(gof::ks_statistic({}, uniform), DomainError);
}

TEST_CASE("two-sample KS statistic") {
  CHECK(gof::ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(gof::ks_two_sample({1, 2, 3}, {4, 5, 6}) == 1.0);
  // ties across samples are stepped together
  CHECK(std::abs(gof::ks_two_sample({1, 2, 2, 3}, {2, 3}) - 0.25) < 1e-15);
}

TEST_CASE("Kolmogorov law") {
  CHECK(std::abs(gof::kolmogorov_sf(1.0) - 0.26999967167735456) < 1e-12);
  CHECK(std::abs(gof::kolmogorov_sf(1.6276236115189504) - 0.01) < 1e-12);
  CHECK(gof::kolmogorov_sf(0.0) == 1.0);
  CHECK(std::abs(gof::ks_critical(0.01, 10000) - 1.6276236115189504 / (100 + 0.12 + 0.0011)) < 1e-12);
  CHECK(std::abs(gof::ks_critical(0.01, 10000, 10000) - gof::ks_critical(0.01, 5000)) < 1e-15);
}

TEST_CASE("association measures") {
  CHECK(std::abs(gof::kendall_tau({1, 2, 3, 4, 5}, {3, 4, 1, 2, 5}) - 0.2) < 1e-15);
  CHECK(std::abs(gof::kendall_tau({1, 2, 2, 4, 5}, {3, 4, 1, 1, 5}) - 0.2222222222222222) < 1e-15);
  CHECK(gof::kendall_tau({1, 2, 3}, {3, 2, 1}) == -1.0);
  CHECK(std::abs(gof::pearson({1, 2, 3, 4}, {2, 1, 4, 3}) - 0.6) < 1e-15);
  CHECK_THROWS_AS(gof::pearson({1}, {1}), DomainError);
}

TEST_CASE("chi-square quantile") {
  CHECK(std::abs(gof::chi_square_quantile(2, 0.95) - 5.991464547107979) < 1e-10);
  CHECK(std::abs(gof::chi_square_quantile(400, 0.99) - 468.7244983740365) < 1e-8);
}
