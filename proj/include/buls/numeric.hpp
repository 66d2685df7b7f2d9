#pragma once

// Thin wrappers over Boost.Math quadrature and bracketing root finding,
// plus a small thread-pool loop used by the study drivers.

#include <cstddef>
#include <functional>

namespace buls::numeric {

struct QuadOptions {
  double rel_tol = 1e-11;
  unsigned max_depth = 20;
  // error bound above which the integral is reported as failed
  double fail_abs = 1e-7;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]; either end may be infinite.
/// Throws QuadratureError when the achieved error bound exceeds opts.fail_abs.
double integrate(const std::function<double(double)>& f, double a, double b, QuadOptions opts = {});

/// Same, returning the error estimate instead of throwing.
double integrate(const std::function<double(double)>& f, double a, double b, double& error,
                 QuadOptions opts = {});

/// int_a^inf f(x) dx through x = a + e^s; copes with algebraic tails and
/// integrable singularities at a. scale marks where the bulk of the mass sits.
double integrate_to_infinity(const std::function<double(double)>& f, double a, double scale = 1.0,
                             QuadOptions opts = {});

/// int_{-inf}^{inf} f, split at c and mapped with integrate_to_infinity on both sides.
double integrate_real_line(const std::function<double(double)>& f, double c = 0.0, double scale = 1.0,
                           QuadOptions opts = {});

/// Root of f on [lo, hi] with f(lo), f(hi) of opposite sign (TOMS 748).
double solve(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
             int max_iter = 200);

/// Number of worker threads: BULS_THREADS if set, else hardware concurrency.
unsigned thread_count();

/// Calls body(i) for i in [0, n), spread over thread_count() workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace buls::numeric
