#include "buls/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "buls/errors.hpp"
#include "buls/numeric.hpp"
#include "buls/sampling.hpp"
#include "buls/specialfn.hpp"

namespace buls {

MomentConvention parse_moment_convention(const std::string& text) {
  if (text == "b") return MomentConvention::SampleSd;
  if (text == "g") return MomentConvention::Population;
  if (text == "G") return MomentConvention::Adjusted;
  throw DomainError("unknown moment convention '" + text + "' (expected b, g or G)");
}

ColumnSummary describe_column(std::vector<double> v, MomentConvention conv) {
  if (v.size() < 2) throw DataError("describe needs at least two values");
  // sorting first makes every sum independent of the row order
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double dn = static_cast<double>(n);
  ColumnSummary s;
  s.n = n;
  s.min = v.front();
  s.max = v.back();
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (s.min == s.max) return s;
  s.sd = std::sqrt(m2 * dn / (dn - 1.0));
  s.cv = 100.0 * s.sd / s.mean;
  switch (conv) {
    case MomentConvention::SampleSd:
      s.cs = m3 / std::pow(s.sd, 3);
      s.ck = m4 / std::pow(s.sd, 4) - 3.0;
      break;
    case MomentConvention::Population:
      s.cs = m3 / std::pow(m2, 1.5);
      s.ck = m4 / (m2 * m2) - 3.0;
      break;
    case MomentConvention::Adjusted: {
      const double g1 = m3 / std::pow(m2, 1.5);
      const double g2 = m4 / (m2 * m2) - 3.0;
      if (n >= 3) s.cs = g1 * std::sqrt(dn * (dn - 1.0)) / (dn - 2.0);
      if (n >= 4) s.ck = ((dn + 1.0) * g2 + 6.0) * (dn - 1.0) / ((dn - 2.0) * (dn - 3.0));
      break;
    }
  }
  return s;
}

Summary describe(const BivariateDataset& data, MomentConvention conv) {
  std::vector<double> a, b;
  a.reserve(data.size());
  b.reserve(data.size());
  for (const auto& r : data.rows) {
    a.push_back(r.w1());
    b.push_back(r.w2());
  }
  return {describe_column(std::move(a), conv), describe_column(std::move(b), conv)};
}

void MCConfig::validate() const {
  theta_true.validate();
  if (replications < 1) throw DomainError("replications must be at least 1");
  if (sample_sizes.empty()) throw DomainError("no sample sizes given");
  for (std::size_t n : sample_sizes) {
    if (n < 6) throw DomainError("sample sizes must be at least 6");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0, 1)");
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t n, std::size_t rep) {
  return base ^ ((static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(rep));
}

namespace {

struct Draw {
  bool ok = false;
  std::array<double, 5> est{};
  std::array<double, 5> se{};
};

Draw one_replication(const MCConfig& cfg, std::size_t n, std::size_t rep) {
  Draw d;
  RandomSource rng(replication_seed(cfg.base_seed, n, rep));
  const auto data = sample_buls(cfg.gen, cfg.theta_true, n, rng);
  FitResult r;
  try {
    r = fit(cfg.gen, data, cfg.fit);
  } catch (const std::exception&) {
    return d;
  }
  if (!r.converged) return d;
  d.est = r.theta_hat.to_array();
  d.se = r.se;
  d.ok = std::all_of(d.se.begin(), d.se.end(), [](double x) { return std::isfinite(x); });
  return d;
}

bool covers(int j, double est, double se, double truth, double z) {
  if (j < 4) return std::abs(est - truth) <= z * se;
  // rho: interval in atanh scale, delta-method SE
  const double a = std::atanh(est);
  const double half = z * se / (1.0 - est * est);
  return std::tanh(a - half) <= truth && truth <= std::tanh(a + half);
}

}  // namespace

MCReport mc_study(const MCConfig& cfg) {
  cfg.validate();
  MCReport rep;
  rep.gen = cfg.gen;
  rep.theta_true = cfg.theta_true;
  rep.replications = cfg.replications;
  rep.confidence = cfg.confidence;
  rep.base_seed = cfg.base_seed;
  const double z = special::normal_quantile(0.5 + 0.5 * cfg.confidence);
  const auto truth = cfg.theta_true.to_array();

  for (std::size_t n : cfg.sample_sizes) {
    std::vector<Draw> draws(cfg.replications);
    numeric::parallel_for(cfg.replications, [&](std::size_t r) { draws[r] = one_replication(cfg, n, r); });

    MCCell cell;
    cell.n = n;
    std::array<double, 5> sum{}, sq{}, hit{};
    for (const auto& d : draws) {
      if (!d.ok) {
        ++cell.failed;
        continue;
      }
      ++cell.used;
      for (int j = 0; j < 5; ++j) {
        const double e = d.est[j] - truth[j];
        sum[j] += d.est[j];
        sq[j] += e * e;
        if (covers(j, d.est[j], d.se[j], truth[j], z)) hit[j] += 1.0;
      }
    }
    cell.failure_rate = static_cast<double>(cell.failed) / static_cast<double>(cfg.replications);
    if (cell.failure_rate > cfg.max_failure_rate || cell.used == 0) {
      throw StudyAborted("Monte Carlo study aborted at n = " + std::to_string(n) + ": " +
                         std::to_string(cell.failed) + " of " + std::to_string(cfg.replications) +
                         " fits failed");
    }
    const double m = static_cast<double>(cell.used);
    for (int j = 0; j < 5; ++j) {
      auto& p = cell.params[j];
      p.bias = sum[j] / m - truth[j];
      p.rmse = std::sqrt(sq[j] / m);
      p.cp = hit[j] / m;
      p.cp_se = std::sqrt(p.cp * (1.0 - p.cp) / m);
    }
    rep.cells.push_back(cell);
  }
  return rep;
}

QQSeries qq_data(const Generator& gen, const ModelParams& theta, const BivariateDataset& data) {
  theta.validate();
  std::vector<double> d2;
  d2.reserve(data.size());
  for (const auto& r : data.rows) d2.push_back(mahalanobis_sq(theta, r));
  std::sort(d2.begin(), d2.end());
  QQSeries qq;
  qq.gen = gen;
  const double n = static_cast<double>(d2.size());
  for (std::size_t i = 0; i < d2.size(); ++i) {
    qq.pairs.emplace_back(maha_quantile(gen, (static_cast<double>(i) + 0.5) / n), d2[i]);
  }
  return qq;
}

double max_studentized_residual(const QQSeries& qq) {
  const std::size_t n = qq.pairs.size();
  if (n < 3) return 0.0;
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : qq.pairs) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : qq.pairs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) return 0.0;
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (const auto& [x, y] : qq.pairs) {
    const double e = y - my - slope * (x - mx);
    rss += e * e;
  }
  const double s = std::sqrt(rss / static_cast<double>(n - 2));
  if (!(s > 0.0)) return 0.0;
  double best = 0.0;
  for (const auto& [x, y] : qq.pairs) {
    const double e = y - my - slope * (x - mx);
    const double h = 1.0 / static_cast<double>(n) + (x - mx) * (x - mx) / sxx;
    best = std::max(best, std::abs(e) / (s * std::sqrt(1.0 - h)));
  }
  return best;
}

}  // namespace buls
