#include "buls/kernels.hpp"

#if defined(__x86_64__) && defined(BULS_HAVE_AVX2)

#include <immintrin.h>

namespace buls::kernels {

namespace {

double fold(__m256d v) {
  alignas(32) double l[4];
  _mm256_store_pd(l, v);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

void quadform(const double* x1, const double* x2, std::size_t n, const QuadformParams& p, double* z1, double* z2,
              double* q) {
  const __m256d mu1 = _mm256_set1_pd(p.mu1);
  const __m256d mu2 = _mm256_set1_pd(p.mu2);
  const __m256d is1 = _mm256_set1_pd(p.inv_sigma1);
  const __m256d is2 = _mm256_set1_pd(p.inv_sigma2);
  const __m256d two_rho = _mm256_set1_pd(2.0 * p.rho);
  const __m256d inv = _mm256_set1_pd(p.inv_one_minus_rho2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x1 + i), mu1), is1);
    const __m256d b = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x2 + i), mu2), is2);
    _mm256_storeu_pd(z1 + i, a);
    _mm256_storeu_pd(z2 + i, b);
    const __m256d cross = _mm256_mul_pd(two_rho, _mm256_mul_pd(a, b));
    const __m256d r = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(a, a), cross), _mm256_mul_pd(b, b));
    _mm256_storeu_pd(q + i, _mm256_mul_pd(r, inv));
  }
  const double tr = 2.0 * p.rho;
  for (; i < n; ++i) {
    const double a = (x1[i] - p.mu1) * p.inv_sigma1;
    const double b = (x2[i] - p.mu2) * p.inv_sigma2;
    z1[i] = a;
    z2[i] = b;
    q[i] = ((a * a - tr * (a * b)) + b * b) * p.inv_one_minus_rho2;
  }
}

double sum(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  double s = fold(acc);
  for (; i < n; ++i) s += v[i];
  return s;
}

std::array<double, 5> score_sums(const double* z1, const double* z2, const double* g, std::size_t n, double rho) {
  const __m256d r = _mm256_set1_pd(rho);
  __m256d acc[5] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(),
                    _mm256_setzero_pd()};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(z1 + i);
    const __m256d b = _mm256_loadu_pd(z2 + i);
    const __m256d w = _mm256_loadu_pd(g + i);
    const __m256d a1 = _mm256_sub_pd(_mm256_mul_pd(r, b), a);
    const __m256d a2 = _mm256_sub_pd(_mm256_mul_pd(r, a), b);
    const __m256d a1g = _mm256_mul_pd(a1, w);
    const __m256d a2g = _mm256_mul_pd(a2, w);
    acc[0] = _mm256_add_pd(acc[0], a1g);
    acc[1] = _mm256_add_pd(acc[1], a2g);
    acc[2] = _mm256_add_pd(acc[2], _mm256_mul_pd(a, a1g));
    acc[3] = _mm256_add_pd(acc[3], _mm256_mul_pd(b, a2g));
    acc[4] = _mm256_add_pd(acc[4], _mm256_mul_pd(a2, a1g));
  }
  std::array<double, 5> s{};
  for (int j = 0; j < 5; ++j) s[j] = fold(acc[j]);
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

}  // namespace

const Table* detail::avx2_unchecked() {
  static const Table table{Isa::Avx2, quadform, sum, score_sums};
  return &table;
}

}  // namespace buls::kernels

#else

namespace buls::kernels {
const Table* detail::avx2_unchecked() { return nullptr; }
}  // namespace buls::kernels

#endif
