#include "buls/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "buls/errors.hpp"

namespace buls::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_field(const std::string& text, const std::string& where) {
  const std::string f = trim(text);
  double v = 0.0;
  const char* end = f.data() + f.size();
  const auto [ptr, ec] = std::from_chars(f.data(), end, v);
  if (f.empty() || ec != std::errc() || ptr != end) throw DataError(where + ": cannot parse '" + f + "' as a number");
  if (!(v > 0.0 && v < 1.0)) throw DataError(where + ": value " + f + " is outside (0, 1)");
  return v;
}

const char* param_names[5] = {"eta1", "eta2", "sigma1", "sigma2", "rho"};

nlohmann::json param_object(const std::array<double, 5>& a) {
  nlohmann::json j;
  for (int i = 0; i < 5; ++i) j[param_names[i]] = a[i];
  return j;
}

nlohmann::json optional_number(const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(); }

}  // namespace

BivariateDataset parse_csv(std::istream& in, const std::string& source) {
  BivariateDataset data;
  data.label = source;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (!header) {
      std::string h;
      for (char c : t) {
        if (c != ' ' && c != '\t') h += c;
      }
      if (h != "w1,w2") throw DataError(where + ": expected header 'w1,w2'");
      header = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw DataError(where + ": expected two comma-separated values");
    }
    const double w1 = parse_field(t.substr(0, comma), where);
    const double w2 = parse_field(t.substr(comma + 1), where);
    data.rows.push_back(UnitPoint::from_unit(w1, w2));
  }
  if (!header) throw DataError(source + ": empty input");
  if (data.rows.empty()) throw DataError(source + ": no data rows");
  return data;
}

BivariateDataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse_csv(in, path);
}

void write_csv(std::ostream& out, const BivariateDataset& data) {
  out << "w1,w2\n";
  char buf[64];
  for (const auto& r : data.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.w1(), r.w2());
    out << buf;
  }
}

void write_csv(const std::string& path, const BivariateDataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  write_csv(out, data);
}

std::string format_sig(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

nlohmann::json to_json(const ModelParams& theta) { return param_object(theta.to_array()); }

nlohmann::json to_json(const FitResult& r) {
  nlohmann::json j;
  j["model"] = kind_name(r.gen.kind());
  j["shape"] = optional_number(r.gen.shape());
  j["theta_hat"] = to_json(r.theta_hat);
  j["se"] = param_object(r.se);
  j["loglik"] = r.loglik;
  j["loglik_unit"] = r.loglik_unit;
  j["aic"] = r.aic;
  j["bic"] = r.bic;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["score_norm"] = r.score_norm;
  return j;
}

nlohmann::json to_json(const ColumnSummary& s) {
  return {{"n", s.n},       {"min", s.min}, {"median", s.median}, {"mean", s.mean},
          {"max", s.max},   {"sd", s.sd},   {"cv", s.cv},         {"cs", optional_number(s.cs)},
          {"ck", optional_number(s.ck)}};
}

nlohmann::json to_json(const Summary& s) { return {{"w1", to_json(s.w1)}, {"w2", to_json(s.w2)}}; }

nlohmann::json to_json(const MCReport& r) {
  nlohmann::json j;
  j["model"] = kind_name(r.gen.kind());
  j["shape"] = optional_number(r.gen.shape());
  j["theta"] = to_json(r.theta_true);
  j["replications"] = r.replications;
  j["confidence"] = r.confidence;
  j["seed"] = r.base_seed;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : r.cells) {
    nlohmann::json cell{{"n", c.n}, {"used", c.used}, {"failed", c.failed}, {"failure_rate", c.failure_rate}};
    for (int i = 0; i < 5; ++i) {
      const auto& p = c.params[i];
      cell["params"][param_names[i]] = {{"bias", p.bias}, {"rmse", p.rmse}, {"cp", p.cp}, {"cp_se", p.cp_se}};
    }
    j["cells"].push_back(cell);
  }
  return j;
}

nlohmann::json to_json(const QQSeries& qq) {
  nlohmann::json j;
  j["model"] = kind_name(qq.gen.kind());
  j["shape"] = optional_number(qq.gen.shape());
  j["pairs"] = nlohmann::json::array();
  for (const auto& [x, y] : qq.pairs) j["pairs"].push_back({{"theoretical", x}, {"empirical", y}});
  return j;
}

MCConfig mc_config_from_json(const nlohmann::json& j) {
  try {
    MCConfig cfg;
    const Kind kind = parse_kind(j.at("model").get<std::string>());
    std::optional<double> shape;
    if (j.contains("shape") && !j.at("shape").is_null()) shape = j.at("shape").get<double>();
    cfg.gen = Generator(kind, shape);
    const auto& th = j.at("theta");
    cfg.theta_true = {th.at("eta1").get<double>(), th.at("eta2").get<double>(), th.at("sigma1").get<double>(),
                      th.at("sigma2").get<double>(), th.at("rho").get<double>()};
    cfg.sample_sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
    cfg.replications = j.at("replications").get<std::size_t>();
    cfg.confidence = j.value("confidence", 0.95);
    cfg.base_seed = j.value("seed", std::uint64_t{0});
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("study config: ") + e.what());
  }
}

void write_fit_csv(std::ostream& out, const std::vector<FitResult>& results) {
  out << "model,shape,eta1,eta2,sigma1,sigma2,rho,se_eta1,se_eta2,se_sigma1,se_sigma2,se_rho,"
         "loglik,aic,bic,converged,score_norm\n";
  for (const auto& r : results) {
    out << kind_name(r.gen.kind()) << ',';
    if (r.gen.shape()) out << format_sig(*r.gen.shape(), 17);
    for (double v : r.theta_hat.to_array()) out << ',' << format_sig(v, 17);
    for (double v : r.se) out << ',' << format_sig(v, 17);
    out << ',' << format_sig(r.loglik, 17) << ',' << format_sig(r.aic, 17) << ',' << format_sig(r.bic, 17) << ','
        << (r.converged ? "true" : "false") << ',' << format_sig(r.score_norm, 17) << '\n';
  }
}

void write_mc_csv(std::ostream& out, const MCReport& r) {
  out << "n,parameter,bias,rmse,cp,cp_se,used,failed\n";
  for (const auto& c : r.cells) {
    for (int i = 0; i < 5; ++i) {
      const auto& p = c.params[i];
      out << c.n << ',' << param_names[i] << ',' << format_sig(p.bias, 17) << ',' << format_sig(p.rmse, 17) << ','
          << format_sig(p.cp, 17) << ',' << format_sig(p.cp_se, 17) << ',' << c.used << ',' << c.failed << '\n';
    }
  }
}

void write_qq_csv(std::ostream& out, const QQSeries& qq) {
  out << "theoretical,empirical\n";
  for (const auto& [x, y] : qq.pairs) out << format_sig(x, 17) << ',' << format_sig(y, 17) << '\n';
}

void write_qq_svg(std::ostream& out, const QQSeries& qq) {
  const double size = 480.0, margin = 48.0, plot = size - 2 * margin;
  double top = 0.0;
  for (const auto& [x, y] : qq.pairs) {
    if (std::isfinite(x)) top = std::max(top, x);
    if (std::isfinite(y)) top = std::max(top, y);
  }
  if (!(top > 0.0)) top = 1.0;
  top *= 1.05;
  const auto px = [&](double v) { return margin + plot * std::clamp(v / top, 0.0, 1.0); };
  const auto py = [&](double v) { return size - margin - plot * std::clamp(v / top, 0.0, 1.0); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  out << "  <rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot << "\" height=\"" << plot
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "  <text x=\"" << size / 2 << "\" y=\"" << size - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
      << "theoretical d² (" << kind_name(qq.gen.kind()) << ")</text>\n";
  out << "  <text x=\"14\" y=\"" << size / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 "
      << size / 2 << ")\">empirical d²</text>\n";
  out << "  <text x=\"" << margin << "\" y=\"" << size - margin + 16 << "\" font-size=\"11\">0</text>\n";
  out << "  <text x=\"" << size - margin << "\" y=\"" << size - margin + 16
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_sig(top, 3) << "</text>\n";
  out << "  <line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(top) << "\" y2=\"" << py(top)
      << "\" stroke=\"#c33\" stroke-width=\"1.5\"/>\n";
  for (const auto& [x, y] : qq.pairs) {
    out << "  <circle cx=\"" << format_sig(px(x), 6) << "\" cy=\"" << format_sig(py(y), 6)
        << "\" r=\"3\" fill=\"#236\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace buls::io
