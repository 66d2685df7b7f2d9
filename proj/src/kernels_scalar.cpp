#include <cstdlib>
#include <cstring>

#include "buls/kernels.hpp"

namespace buls::kernels {

namespace {

void quadform(const double* x1, const double* x2, std::size_t n, const QuadformParams& p, double* z1, double* z2,
              double* q) {
  const double two_rho = 2.0 * p.rho;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = (x1[i] - p.mu1) * p.inv_sigma1;
    const double b = (x2[i] - p.mu2) * p.inv_sigma2;
    z1[i] = a;
    z2[i] = b;
    q[i] = ((a * a - two_rho * (a * b)) + b * b) * p.inv_one_minus_rho2;
  }
}

double sum(const double* v, std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int k = 0; k < 4; ++k) l[k] += v[i + k];
  }
  double s = (l[0] + l[1]) + (l[2] + l[3]);
  for (; i < n; ++i) s += v[i];
  return s;
}

std::array<double, 5> score_sums(const double* z1, const double* z2, const double* g, std::size_t n, double rho) {
  double l[5][4] = {};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int k = 0; k < 4; ++k) {
      const double a = z1[i + k], b = z2[i + k], w = g[i + k];
      const double a1 = rho * b - a;
      const double a2 = rho * a - b;
      const double a1g = a1 * w;
      const double a2g = a2 * w;
      l[0][k] += a1g;
      l[1][k] += a2g;
      l[2][k] += a * a1g;
      l[3][k] += b * a2g;
      l[4][k] += a2 * a1g;
    }
  }
  std::array<double, 5> s{};
  for (int j = 0; j < 5; ++j) s[j] = (l[j][0] + l[j][1]) + (l[j][2] + l[j][3]);
  for (; i < n; ++i) {
    const double a = z1[i], b = z2[i], w = g[i];
    const double a1 = rho * b - a;
    const double a2 = rho * a - b;
    const double a1g = a1 * w;
    const double a2g = a2 * w;
    s[0] += a1g;
    s[1] += a2g;
    s[2] += a * a1g;
    s[3] += b * a2g;
    s[4] += a2 * a1g;
  }
  return s;
}

bool forced_scalar() {
  const char* env = std::getenv("BULS_SIMD");
  return env != nullptr && std::strcmp(env, "scalar") == 0;
}

}  // namespace

const Table& scalar_table() {
  static const Table table{Isa::Scalar, quadform, sum, score_sums};
  return table;
}

const Table* avx2_table() {
#if defined(__x86_64__)
  static const bool usable = __builtin_cpu_supports("avx2");
  return usable ? detail::avx2_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

// Advanced SIMD is mandatory on AArch64.
const Table* neon_table() { return detail::neon_unchecked(); }

const Table& active() {
  static const Table& chosen = [] () -> const Table& {
    if (forced_scalar()) return scalar_table();
    if (const Table* t = avx2_table()) return *t;
    if (const Table* t = neon_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace buls::kernels
