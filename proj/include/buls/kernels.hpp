#pragma once

// Data-parallel inner loops of the likelihood. Each kernel has a scalar
// reference and vector variants; the variant is picked once at runtime.
// All variants accumulate in four interleaved lanes folded as
// (l0 + l1) + (l2 + l3), then add the tail in order, so results agree bitwise.

#include <array>
#include <cstddef>

namespace buls::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct QuadformParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double inv_sigma1 = 1.0;
  double inv_sigma2 = 1.0;
  double rho = 0.0;
  double inv_one_minus_rho2 = 1.0;
};

/// z_i = (x_i - mu_i) / sigma_i and q = (z1^2 - 2 rho z1 z2 + z2^2) / (1 - rho^2).
using QuadformFn = void (*)(const double* x1, const double* x2, std::size_t n, const QuadformParams& p, double* z1,
                            double* z2, double* q);
using SumFn = double (*)(const double* v, std::size_t n);
/// With a1 = rho z2 - z1 and a2 = rho z1 - z2, returns the sums of
/// a1 G, a2 G, z1 a1 G, z2 a2 G, a1 a2 G.
using ScoreSumsFn = std::array<double, 5> (*)(const double* z1, const double* z2, const double* g, std::size_t n,
                                              double rho);

struct Table {
  Isa isa;
  QuadformFn quadform;
  SumFn sum;
  ScoreSumsFn score_sums;
};

const Table& scalar_table();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const Table* avx2_table();
const Table* neon_table();

namespace detail {
// Defined in the per-ISA translation units; nullptr when not compiled in.
// Callers must check CPU support first.
const Table* avx2_unchecked();
const Table* neon_unchecked();
}  // namespace detail

/// Best table for this CPU; BULS_SIMD=scalar forces the reference.
const Table& active();
const char* isa_name(Isa isa);

}  // namespace buls::kernels
