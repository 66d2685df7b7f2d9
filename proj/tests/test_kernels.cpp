#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "buls/kernels.hpp"

using namespace buls::kernels;

namespace {

std::vector<const Table*> variants() {
  std::vector<const Table*> out{&scalar_table()};
  if (const Table* t = avx2_table()) out.push_back(t);
  if (const Table* t = neon_table()) out.push_back(t);
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("dispatch") {
  const Table& t = active();
  CHECK(t.quadform != nullptr);
  CHECK(std::string(isa_name(t.isa)).size() > 0);
  CHECK(scalar_table().isa == Isa::Scalar);
  MESSAGE("active kernels: " << isa_name(t.isa));
}

TEST_CASE("scalar reference against direct formulas") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 2.0);
  const std::size_t n = 37;
  std::vector<double> x1(n), x2(n), z1(n), z2(n), q(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = nd(rng);
    x2[i] = nd(rng);
  }
  const QuadformParams p{0.3, -0.2, 1 / 0.7, 1 / 1.3, 0.6, 1 / (1 - 0.36)};
  scalar_table().quadform(x1.data(), x2.data(), n, p, z1.data(), z2.data(), q.data());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = (x1[i] - 0.3) / 0.7, b = (x2[i] + 0.2) / 1.3;
    CHECK(std::abs(z1[i] - a) < 1e-14 * (1 + std::abs(a)));
    CHECK(std::abs(q[i] - (a * a - 1.2 * a * b + b * b) / 0.64) < 1e-13 * (1 + q[i]));
    total += q[i];
  }
  CHECK(std::abs(scalar_table().sum(q.data(), n) - total) < 1e-12 * total);
}

TEST_CASE("vector variants match the scalar reference bit for bit") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0.0, 3.0);
  std::uniform_real_distribution<double> ud(-1.0, 0.0);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 16, 31, 37, 64, 101, 1000}) {
    std::vector<double> x1(n), x2(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      x1[i] = nd(rng);
      x2[i] = nd(rng);
      g[i] = ud(rng);
    }
    const QuadformParams p{0.1, 0.4, 1 / 0.9, 1 / 0.35, -0.45, 1 / (1 - 0.2025)};
    std::vector<double> rz1(n), rz2(n), rq(n);
    scalar_table().quadform(x1.data(), x2.data(), n, p, rz1.data(), rz2.data(), rq.data());
    const double rsum = scalar_table().sum(rq.data(), n);
    const auto rscore = scalar_table().score_sums(rz1.data(), rz2.data(), g.data(), n, p.rho);
    for (const Table* t : variants()) {
      CAPTURE(isa_name(t->isa));
      CAPTURE(n);
      std::vector<double> z1(n), z2(n), q(n);
      t->quadform(x1.data(), x2.data(), n, p, z1.data(), z2.data(), q.data());
      bool same = true;
      for (std::size_t i = 0; i < n; ++i) {
        same = same && same_bits(z1[i], rz1[i]) && same_bits(z2[i], rz2[i]) && same_bits(q[i], rq[i]);
      }
      CHECK(same);
      CHECK(same_bits(t->sum(q.data(), n), rsum));
      const auto sc = t->score_sums(z1.data(), z2.data(), g.data(), n, p.rho);
      for (int j = 0; j < 5; ++j) CHECK(same_bits(sc[j], rscore[j]));
    }
  }
}
