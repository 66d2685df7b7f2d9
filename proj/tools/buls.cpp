// buls: command-line front end for fitting, simulating and diagnosing
// bivariate unit-log-symmetric models.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "buls/datasets.hpp"
#include "buls/errors.hpp"
#include "buls/experiments.hpp"
#include "buls/gof.hpp"
#include "buls/inference.hpp"
#include "buls/io.hpp"
#include "buls/sampling.hpp"

using namespace buls;

namespace {

constexpr int kUsage = 2;
constexpr int kData = 3;
constexpr int kNotConverged = 4;

/// Right-aligned text columns.
class TextTable {
 public:
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      width.resize(std::max(width.size(), r.size()), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) line += "  ";
        if (i == 0) {
          line += r[i] + std::string(width[i] - r[i].size(), ' ');
        } else {
          line += std::string(width[i] - r[i].size(), ' ') + r[i];
        }
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string num(double x) { return io::format_sig(x, 6); }

BivariateDataset load_data(const std::string& source) {
  const auto names = datasets::names();
  if (std::find(names.begin(), names.end(), source) != names.end()) return datasets::by_name(source);
  return io::read_csv(source);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const double a = std::stod(text.substr(0, dots));
      const double b = std::stod(text.substr(dots + 2));
      if (!(a > 0.0) || b < a || b - a > 1e6) throw DomainError("");
      for (double v = a; v <= b + 1e-9; v += 1.0) grid.push_back(v);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    }
  } catch (const std::exception&) {
    throw DomainError("bad shape grid '" + text + "' (expected a..b or a comma list)");
  }
  if (grid.empty()) throw DomainError("empty shape grid");
  return grid;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

struct FitFlags {
  std::string data;
  std::string model;
  std::optional<double> shape;
  std::string grid = "1..30";
  std::string config;
  int restarts = 3;
  double tol = 1e-9;
  int max_evals = 40000;
  std::uint64_t seed = 20240611;
  std::string out;
  std::string csv;
  bool json = false;

  void add_data(CLI::App* sub) { sub->add_option("--data", data, "uefa, uefa-table, fifa or a w1,w2 CSV file")->required(); }

  void add_model(CLI::App* sub) {
    sub->add_option("--model", model, "normal, student, hyperbolic, laplace or slash")
        ->required()
        ->check(CLI::IsMember({"normal", "student", "hyperbolic", "laplace", "slash"}));
    sub->add_option("--shape", shape, "fixed nu or q; profiled over --shape-grid when omitted");
  }

  void add_fit(CLI::App* sub) {
    sub->add_option("--shape-grid", grid, "profile grid, a..b or a comma list")->capture_default_str();
    sub->add_option("--restarts", restarts, "simplex restarts")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", tol, "simplex diameter tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--max-evals", max_evals, "likelihood evaluations per simplex run")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "restart jitter seed")->capture_default_str();
    sub->add_option("--fit-config", config, "JSON file with restarts, tolerance, max_evaluations, seed, shape_grid")
        ->check(CLI::ExistingFile);
  }

  // config file values apply first, explicit flags win
  FitOptions options(const CLI::App* sub) {
    if (!config.empty()) {
      std::ifstream in(config);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw DomainError(config + ": " + e.what());
      }
      if (sub->count("--restarts") == 0) restarts = j.value("restarts", restarts);
      if (sub->count("--tol") == 0) tol = j.value("tolerance", tol);
      if (sub->count("--max-evals") == 0) max_evals = j.value("max_evaluations", max_evals);
      if (sub->count("--seed") == 0) seed = j.value("seed", seed);
      if (sub->count("--shape-grid") == 0 && j.contains("shape_grid")) {
        const auto& g = j.at("shape_grid");
        grid = g.is_string() ? g.get<std::string>() : "";
        if (g.is_array()) {
          for (const auto& v : g) grid += (grid.empty() ? "" : ",") + io::format_sig(v.get<double>(), 17);
        }
      }
    }
    FitOptions o;
    o.restarts = restarts;
    o.diameter_tol = tol;
    o.max_evaluations = max_evals;
    o.seed = seed;
    return o;
  }
};

struct ModelFit {
  FitResult result;
  std::optional<ProfileResult> profile;
};

ModelFit fit_model(Kind kind, std::optional<double> shape, const BivariateDataset& data, const std::string& grid,
                   const FitOptions& opts) {
  ModelFit m;
  if (kind_has_shape(kind) && !shape) {
    m.profile = profile_fit(kind, data, parse_grid(grid), opts);
    m.result = m.profile->best;
  } else {
    m.result = fit(Generator(kind, shape), data, opts);
  }
  return m;
}

nlohmann::json fit_json(const ModelFit& m, std::size_t n) {
  auto j = io::to_json(m.result);
  j["n"] = n;
  if (m.profile) {
    auto& p = j["profile"];
    p = nlohmann::json::array();
    for (const auto& e : m.profile->entries) {
      nlohmann::json row{{"shape", e.shape}};
      row["loglik"] = e.result ? nlohmann::json(e.result->loglik) : nlohmann::json();
      if (!e.error.empty()) row["error"] = e.error;
      p.push_back(row);
    }
    j["warnings"] = m.profile->warnings;
  }
  return j;
}

void fit_rows(TextTable& t, const FitResult& r, const std::string& rank = "") {
  const auto th = r.theta_hat.to_array();
  std::vector<std::string> top, se;
  if (!rank.empty()) {
    top.push_back(rank);
    se.push_back("");
  }
  top.push_back(kind_name(r.gen.kind()));
  top.push_back(r.gen.shape() ? num(*r.gen.shape()) : "-");
  se.push_back("");
  se.push_back("");
  for (int i = 0; i < 5; ++i) {
    top.push_back(num(th[i]));
    se.push_back("(" + num(r.se[i]) + ")");
  }
  for (const double v : {r.loglik, r.aic, r.bic}) top.push_back(num(v));
  top.push_back(r.converged ? "yes" : "no");
  t.row(top);
  t.row(se);
}

std::vector<std::string> fit_header(bool ranked) {
  std::vector<std::string> h{"model", "shape", "eta1", "eta2", "sigma1", "sigma2", "rho", "loglik", "aic", "bic",
                             "converged"};
  if (ranked) h.insert(h.begin(), "rank");
  return h;
}

void warn_not_converged(const FitResult& r) {
  std::cerr << "warning: " << r.gen.label() << " fit did not converge (score norm " << num(r.score_norm)
            << ")\n";
}

int cmd_describe(const std::string& data_source, const std::string& moments, bool json) {
  const auto data = load_data(data_source);
  const auto s = describe(data, parse_moment_convention(moments));
  if (json) {
    std::cout << io::to_json(s).dump(2) << '\n';
    return 0;
  }
  TextTable t;
  t.row({"variable", "n", "min", "median", "mean", "max", "sd", "cv", "cs", "ck"});
  const auto opt = [](const std::optional<double>& x) { return x ? num(*x) : std::string("NA"); };
  for (const auto& [name, c] : {std::pair{"w1", s.w1}, std::pair{"w2", s.w2}}) {
    t.row({name, std::to_string(c.n), num(c.min), num(c.median), num(c.mean), num(c.max), num(c.sd), num(c.cv),
           opt(c.cs), opt(c.ck)});
  }
  t.print(std::cout);
  return 0;
}

int cmd_fit(FitFlags& f, const CLI::App* sub) {
  const auto opts = f.options(sub);
  const auto data = load_data(f.data);
  const auto m = fit_model(parse_kind(f.model), f.shape, data, f.grid, opts);
  const auto j = fit_json(m, data.size());
  if (!f.out.empty()) write_json_file(f.out, j);
  if (!f.csv.empty()) {
    std::ofstream out(f.csv);
    io::write_fit_csv(out, {m.result});
  }
  if (f.json) {
    std::cout << j.dump(2) << '\n';
  } else {
    TextTable t;
    t.row(fit_header(false));
    fit_rows(t, m.result);
    t.print(std::cout);
    std::cout << "n = " << data.size() << ", score norm " << num(m.result.score_norm) << '\n';
  }
  if (m.profile) {
    for (const auto& w : m.profile->warnings) std::cerr << "warning: " << w << '\n';
  }
  if (!m.result.converged) {
    warn_not_converged(m.result);
    return kNotConverged;
  }
  return 0;
}

int cmd_fit_all(FitFlags& f, const CLI::App* sub) {
  const auto opts = f.options(sub);
  const auto data = load_data(f.data);
  std::vector<ModelFit> fits;
  for (Kind k : {Kind::Normal, Kind::StudentT, Kind::Hyperbolic, Kind::Laplace, Kind::Slash}) {
    fits.push_back(fit_model(k, std::nullopt, data, f.grid, opts));
  }
  std::stable_sort(fits.begin(), fits.end(),
                   [](const ModelFit& a, const ModelFit& b) {
                     // an unconverged fit has no trustworthy AIC; it goes last
                     if (a.result.converged != b.result.converged) return a.result.converged;
                     return a.result.aic < b.result.aic;
                   });
  nlohmann::json j = nlohmann::json::array();
  std::vector<FitResult> results;
  for (const auto& m : fits) {
    j.push_back(fit_json(m, data.size()));
    results.push_back(m.result);
  }
  if (!f.out.empty()) write_json_file(f.out, j);
  if (!f.csv.empty()) {
    std::ofstream out(f.csv);
    io::write_fit_csv(out, results);
  }
  if (f.json) {
    std::cout << j.dump(2) << '\n';
  } else {
    TextTable t;
    t.row(fit_header(true));
    for (std::size_t i = 0; i < results.size(); ++i) fit_rows(t, results[i], std::to_string(i + 1));
    t.print(std::cout);
    std::cout << "n = " << data.size() << ", ranked by AIC (unconverged fits last)\n";
  }
  int rc = 0;
  for (const auto& r : results) {
    if (!r.converged) {
      warn_not_converged(r);
      rc = kNotConverged;
    }
  }
  return rc;
}

struct SimFlags {
  std::string model;
  std::optional<double> shape;
  double eta1 = 0, eta2 = 0, sigma1 = 0, sigma2 = 0, rho = 0;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_simulate(const SimFlags& s) {
  const Generator gen(parse_kind(s.model), s.shape);
  const ModelParams th{s.eta1, s.eta2, s.sigma1, s.sigma2, s.rho};
  th.validate();
  RandomSource rng(s.seed);
  const auto data = sample_buls(gen, th, s.n, rng);
  if (s.out.empty()) {
    io::write_csv(std::cout, data);
  } else {
    io::write_csv(s.out, data);
  }
  return 0;
}

int cmd_mc_study(const std::string& config, const std::string& out, const std::string& json_out) {
  std::ifstream in(config);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(config + ": " + e.what());
  }
  const auto cfg = io::mc_config_from_json(j);
  const auto report = mc_study(cfg);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw DataError("cannot write " + out);
    io::write_mc_csv(f, report);
  }
  if (!json_out.empty()) write_json_file(json_out, io::to_json(report));
  TextTable t;
  t.row({"n", "parameter", "bias", "rmse", "cp", "failed"});
  const char* names[5] = {"eta1", "eta2", "sigma1", "sigma2", "rho"};
  for (const auto& c : report.cells) {
    for (int i = 0; i < 5; ++i) {
      const auto& p = c.params[i];
      t.row({std::to_string(c.n), names[i], num(p.bias), num(p.rmse), num(p.cp), std::to_string(c.failed)});
    }
  }
  t.print(std::cout);
  return 0;
}

int cmd_qq(FitFlags& f, const CLI::App* sub, const std::string& svg) {
  const auto opts = f.options(sub);
  const auto data = load_data(f.data);
  const auto m = fit_model(parse_kind(f.model), f.shape, data, f.grid, opts);
  const auto qq = qq_data(m.result.gen, m.result.theta_hat, data);
  if (!f.out.empty()) {
    std::ofstream out(f.out);
    if (!out) throw DataError("cannot write " + f.out);
    io::write_qq_csv(out, qq);
  } else {
    io::write_qq_csv(std::cout, qq);
  }
  if (!svg.empty()) {
    std::ofstream out(svg);
    if (!out) throw DataError("cannot write " + svg);
    io::write_qq_svg(out, qq);
  }
  std::vector<double> x, y;
  for (const auto& [a, b] : qq.pairs) {
    x.push_back(a);
    y.push_back(b);
  }
  std::cerr << m.result.gen.label() << ": QQ correlation " << num(x.size() > 1 ? gof::pearson(x, y) : 1.0)
            << ", max studentized residual " << num(max_studentized_residual(qq)) << '\n';
  if (!m.result.converged) {
    warn_not_converged(m.result);
    return kNotConverged;
  }
  return 0;
}

int cmd_datasets(const std::string& dir) {
  if (dir.empty()) {
    for (const auto& name : datasets::names()) std::cout << name << '\t' << datasets::by_name(name).size() << '\n';
    return 0;
  }
  std::filesystem::create_directories(dir);
  for (const auto& name : datasets::names()) {
    const auto path = (std::filesystem::path(dir) / (name + ".csv")).string();
    io::write_csv(path, datasets::by_name(name));
    std::cout << path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bivariate unit-log-symmetric models: fit, simulate and diagnose"};
  app.require_subcommand(1, 1);

  auto* describe_cmd = app.add_subcommand("describe", "summary statistics of a dataset");
  std::string describe_data, moments = "b";
  bool describe_json = false;
  describe_cmd->add_option("--data", describe_data, "uefa, uefa-table, fifa or a w1,w2 CSV file")->required();
  describe_cmd->add_option("--moments", moments, "skewness/kurtosis convention: b, g or G")
      ->capture_default_str()
      ->check(CLI::IsMember({"b", "g", "G"}));
  describe_cmd->add_flag("--json", describe_json, "print JSON instead of a table");

  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit of one model");
  fit_flags.add_data(fit_cmd);
  fit_flags.add_model(fit_cmd);
  fit_flags.add_fit(fit_cmd);
  fit_cmd->add_option("--out", fit_flags.out, "write the result as JSON");
  fit_cmd->add_option("--csv", fit_flags.csv, "write the result as CSV");
  fit_cmd->add_flag("--json", fit_flags.json, "print JSON instead of a table");

  FitFlags all_flags;
  auto* all_cmd = app.add_subcommand("fit-all", "fit all five models and rank them by AIC");
  all_flags.add_data(all_cmd);
  all_flags.add_fit(all_cmd);
  all_cmd->add_option("--out", all_flags.out, "write the ranking as JSON");
  all_cmd->add_option("--csv", all_flags.csv, "write the ranking as CSV");
  all_cmd->add_flag("--json", all_flags.json, "print JSON instead of a table");

  SimFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "draw a sample from a model");
  sim_cmd->add_option("--model", sim.model, "normal, student, hyperbolic, laplace or slash")
      ->required()
      ->check(CLI::IsMember({"normal", "student", "hyperbolic", "laplace", "slash"}));
  sim_cmd->add_option("--shape", sim.shape, "nu or q");
  sim_cmd->add_option("--eta1", sim.eta1)->required();
  sim_cmd->add_option("--eta2", sim.eta2)->required();
  sim_cmd->add_option("--sigma1", sim.sigma1)->required();
  sim_cmd->add_option("--sigma2", sim.sigma2)->required();
  sim_cmd->add_option("--rho", sim.rho)->required();
  sim_cmd->add_option("-n", sim.n, "sample size")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "CSV file (stdout when omitted)");

  std::string study_config, study_out, study_json;
  auto* mc_cmd = app.add_subcommand("mc-study", "Monte Carlo bias, RMSE and coverage study");
  mc_cmd->add_option("--config", study_config, "JSON study description")->required()->check(CLI::ExistingFile);
  mc_cmd->add_option("--out", study_out, "report CSV");
  mc_cmd->add_option("--json", study_json, "report JSON");

  FitFlags qq_flags;
  std::string svg;
  auto* qq_cmd = app.add_subcommand("qq", "Mahalanobis QQ series of a fitted model");
  qq_flags.add_data(qq_cmd);
  qq_flags.add_model(qq_cmd);
  qq_flags.add_fit(qq_cmd);
  qq_cmd->add_option("--out", qq_flags.out, "QQ CSV (stdout when omitted)");
  qq_cmd->add_option("--svg", svg, "SVG scatter with the reference line");

  std::string export_dir;
  auto* data_cmd = app.add_subcommand("datasets", "list or export the bundled datasets");
  data_cmd->add_option("--export", export_dir, "directory for the CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*describe_cmd) return cmd_describe(describe_data, moments, describe_json);
    if (*fit_cmd) return cmd_fit(fit_flags, fit_cmd);
    if (*all_cmd) return cmd_fit_all(all_flags, all_cmd);
    if (*sim_cmd) return cmd_simulate(sim);
    if (*mc_cmd) return cmd_mc_study(study_config, study_out, study_json);
    if (*qq_cmd) return cmd_qq(qq_flags, qq_cmd, svg);
    if (*data_cmd) return cmd_datasets(export_dir);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NonFiniteLikelihood& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const StudyAborted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}
