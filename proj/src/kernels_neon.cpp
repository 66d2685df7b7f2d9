#include "buls/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace buls::kernels {

namespace {

// lanes (0, 1) live in lo, (2, 3) in hi
struct Acc {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);

  double fold() const {
    return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) + (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  }
};

float64x2_t quad2(float64x2_t a, float64x2_t b, float64x2_t two_rho, float64x2_t inv) {
  const float64x2_t cross = vmulq_f64(two_rho, vmulq_f64(a, b));
  return vmulq_f64(vaddq_f64(vsubq_f64(vmulq_f64(a, a), cross), vmulq_f64(b, b)), inv);
}

void quadform(const double* x1, const double* x2, std::size_t n, const QuadformParams& p, double* z1, double* z2,
              double* q) {
  const float64x2_t mu1 = vdupq_n_f64(p.mu1);
  const float64x2_t mu2 = vdupq_n_f64(p.mu2);
  const float64x2_t is1 = vdupq_n_f64(p.inv_sigma1);
  const float64x2_t is2 = vdupq_n_f64(p.inv_sigma2);
  const float64x2_t two_rho = vdupq_n_f64(2.0 * p.rho);
  const float64x2_t inv = vdupq_n_f64(p.inv_one_minus_rho2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vmulq_f64(vsubq_f64(vld1q_f64(x1 + i), mu1), is1);
    const float64x2_t b = vmulq_f64(vsubq_f64(vld1q_f64(x2 + i), mu2), is2);
    vst1q_f64(z1 + i, a);
    vst1q_f64(z2 + i, b);
    vst1q_f64(q + i, quad2(a, b, two_rho, inv));
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
  Acc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc.lo = vaddq_f64(acc.lo, vld1q_f64(v + i));
    acc.hi = vaddq_f64(acc.hi, vld1q_f64(v + i + 2));
  }
  double s = acc.fold();
  for (; i < n; ++i) s += v[i];
  return s;
}

std::array<double, 5> score_sums(const double* z1, const double* z2, const double* g, std::size_t n, double rho) {
  const float64x2_t r = vdupq_n_f64(rho);
  Acc acc[5];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int half = 0; half < 2; ++half) {
      const std::size_t k = i + 2 * half;
      const float64x2_t a = vld1q_f64(z1 + k);
      const float64x2_t b = vld1q_f64(z2 + k);
      const float64x2_t w = vld1q_f64(g + k);
      const float64x2_t a1 = vsubq_f64(vmulq_f64(r, b), a);
      const float64x2_t a2 = vsubq_f64(vmulq_f64(r, a), b);
      const float64x2_t a1g = vmulq_f64(a1, w);
      const float64x2_t a2g = vmulq_f64(a2, w);
      const float64x2_t terms[5] = {a1g, a2g, vmulq_f64(a, a1g), vmulq_f64(b, a2g), vmulq_f64(a2, a1g)};
      for (int j = 0; j < 5; ++j) {
        float64x2_t& lane = half == 0 ? acc[j].lo : acc[j].hi;
        lane = vaddq_f64(lane, terms[j]);
      }
    }
  }
  std::array<double, 5> s{};
  for (int j = 0; j < 5; ++j) s[j] = acc[j].fold();
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

const Table* detail::neon_unchecked() {
  static const Table table{Isa::Neon, quadform, sum, score_sums};
  return &table;
}

}  // namespace buls::kernels

#else

namespace buls::kernels {
const Table* detail::neon_unchecked() { return nullptr; }
}  // namespace buls::kernels

#endif
