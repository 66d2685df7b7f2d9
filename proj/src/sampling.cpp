#include "buls/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "buls/errors.hpp"
#include "buls/specialfn.hpp"

namespace buls {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Latent bounds matching w in [1e-15, 1 - 1e-15].
const double kTMin = -std::log1p(-1e-15);
const double kTMax = -std::log(1e-15);

std::array<double, 2> from_radius(double r, RandomSource& rng) {
  const double d = std::sin(0.5 * special::kPi * rng.uniform());
  const double u1 = (rng.next_u64() >> 63) ? 1.0 : -1.0;
  const double u2 = (rng.next_u64() >> 63) ? 1.0 : -1.0;
  return {r * d * u1, r * std::sqrt(std::max(0.0, 1.0 - d * d)) * u2};
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t RandomSource::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomSource::uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double RandomSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Marsaglia polar method
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double RandomSource::exponential() { return -std::log(uniform()); }

std::array<double, 2> sample_z_pair_generic(const Generator& gen, RandomSource& rng) {
  const double r2 = gen.r2_law()->quantile(rng.uniform());
  return from_radius(std::sqrt(r2), rng);
}

std::array<double, 2> sample_z_pair(const Generator& gen, RandomSource& rng) {
  switch (gen.kind()) {
    case Kind::Normal:
      return from_radius(std::sqrt(-2.0 * std::log(rng.uniform())), rng);
    case Kind::StudentT: {
      const double nu = gen.shape_or_zero();
      const double r2 = nu * std::expm1(-(2.0 / nu) * std::log(rng.uniform()));
      return from_radius(std::sqrt(r2), rng);
    }
    case Kind::Laplace: {
      const double scale = std::sqrt(rng.exponential());
      return {scale * rng.normal(), scale * rng.normal()};
    }
    case Kind::Slash: {
      const double scale = std::pow(rng.uniform(), -1.0 / gen.shape_or_zero());
      return {scale * rng.normal(), scale * rng.normal()};
    }
    case Kind::Hyperbolic:
      break;
  }
  return sample_z_pair_generic(gen, rng);
}

BivariateDataset sample_buls(const Generator& gen, const ModelParams& theta, std::size_t n, RandomSource& rng) {
  theta.validate();
  if (n == 0) throw DomainError("sample size must be at least 1");
  BivariateDataset data;
  data.rows.reserve(n);
  const double s = std::sqrt(1.0 - theta.rho * theta.rho);
  const double mu1 = std::log(theta.eta1);
  const double mu2 = std::log(theta.eta2);
  for (std::size_t k = 0; k < n; ++k) {
    const auto z = sample_z_pair(gen, rng);
    const double t1 = std::exp(mu1 + theta.sigma1 * z[0]);
    const double t2 = std::exp(mu2 + theta.sigma2 * (theta.rho * z[0] + s * z[1]));
    data.rows.push_back(UnitPoint::from_latent(std::clamp(t1, kTMin, kTMax), std::clamp(t2, kTMin, kTMax)));
  }
  return data;
}

}  // namespace buls
