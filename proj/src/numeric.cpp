#include "buls/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "buls/errors.hpp"

namespace buls::numeric {

double integrate(const std::function<double(double)>& f, double a, double b, double& error,
                 QuadOptions opts) {
  if (a == b) {
    error = 0.0;
    return 0.0;
  }
  double l1 = 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (!std::isfinite(a) || !std::isfinite(b)) return GK::integrate(f, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
  // the Boost error estimate degrades on very narrow intervals; work on [0, 1]
  const double width = b - a;
  const auto unit = [&](double u) { return f(a + width * u) * width; };
  return GK::integrate(unit, 0.0, 1.0, opts.max_depth, opts.rel_tol, &error, &l1);
}

double integrate(const std::function<double(double)>& f, double a, double b, QuadOptions opts) {
  double error = 0.0;
  const double value = integrate(f, a, b, error, opts);
  if (!(error <= opts.fail_abs) || !std::isfinite(value)) {
    throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]",
                          error);
  }
  return value;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double scale,
                             QuadOptions opts) {
  const auto g = [&](double s) {
    const double e = std::exp(s);
    if (!std::isfinite(e) || e == 0.0) return 0.0;
    const double v = f(a + e) * e;
    return std::isfinite(v) ? v : 0.0;
  };
  const double split = std::log(scale);
  return integrate(g, -std::numeric_limits<double>::infinity(), split, opts) +
         integrate(g, split, std::numeric_limits<double>::infinity(), opts);
}

double integrate_real_line(const std::function<double(double)>& f, double c, double scale, QuadOptions opts) {
  const auto mirrored = [&](double x) { return f(2.0 * c - x); };
  return integrate_to_infinity(f, c, scale, opts) + integrate_to_infinity(mirrored, c, scale, opts);
}

double solve(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
             int max_iter) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw DomainError("solve: root is not bracketed");
  boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_iter);
  const auto tol = [](double x, double y) {
    return std::abs(x - y) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(y));
  };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

unsigned thread_count() {
  if (const char* env = std::getenv("BULS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace buls::numeric
