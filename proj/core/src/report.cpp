#include "njstab/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace njstab {

namespace {

using nlohmann::json;

// Infinite values have no JSON number representation; the schema uses the
// string "inf" instead.
json num_or_inf(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

double parse_num_or_inf(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    throw Error("report: bad numeric field '" + j.get<std::string>() + "'");
  }
  return j.get<double>();
}

json element_to_json(const Element& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Element element_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) throw Error("report: empty matrix");
  const auto cols = j.at(0).size();
  Element m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      const json& entry = j.at(i).at(k);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["algebra.dim"] = c.dim;
  j["derivation.kind"] = c.derivation_kind;
  j["derivation.b"] = c.derivation_b;
  j["derivation.skew_adjoint"] = c.skew_adjoint;
  j["perturbation.shape"] = c.perturbation_shape;
  j["perturbation.theta_prime"] = c.theta_prime;
  j["perturbation.p"] = c.perturbation_p;
  j["perturbation.c"] = c.cap;
  j["perturbation.direction"] = c.direction;
  j["perturbation.star_compatible"] = c.star_compatible;
  j["n"] = c.n;
  j["variant"] = to_string(c.variant);
  j["control.shape"] = to_string(c.control_shape);
  j["control.theta"] = c.control_theta ? json(*c.control_theta) : json(nullptr);
  j["control.exponent"] = c.control_exponent;
  j["cloud.count"] = c.cloud_count;
  j["cloud.radius"] = c.cloud_radius;
  j["cloud.distribution"] = to_string(c.cloud_distribution);
  j["mu_grid"] = c.mu_grid;
  j["corrector.tolerance"] = c.tolerance;
  j["corrector.m_max"] = c.m_max;
  j["checks"] = c.checks;
  j["seed"] = c.seed;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  c.dim = j.at("algebra.dim").get<int>();
  c.derivation_kind = j.at("derivation.kind").get<std::string>();
  c.derivation_b = j.at("derivation.b").get<std::string>();
  c.skew_adjoint = j.at("derivation.skew_adjoint").get<bool>();
  c.perturbation_shape = j.at("perturbation.shape").get<std::string>();
  c.theta_prime = j.at("perturbation.theta_prime").get<double>();
  c.perturbation_p = j.at("perturbation.p").get<double>();
  c.cap = j.at("perturbation.c").get<double>();
  c.direction = j.at("perturbation.direction").get<std::string>();
  c.star_compatible = j.at("perturbation.star_compatible").get<bool>();
  c.n = j.at("n").get<int>();
  c.variant = variant_from_string(j.at("variant").get<std::string>());
  c.control_shape = control_shape_from_string(j.at("control.shape").get<std::string>());
  if (!j.at("control.theta").is_null()) {
    c.control_theta = j.at("control.theta").get<double>();
  }
  c.control_exponent = j.at("control.exponent").get<double>();
  c.cloud_count = j.at("cloud.count").get<int>();
  c.cloud_radius = j.at("cloud.radius").get<double>();
  c.cloud_distribution =
      distribution_from_string(j.at("cloud.distribution").get<std::string>());
  c.mu_grid = j.at("mu_grid").get<int>();
  c.tolerance = j.at("corrector.tolerance").get<double>();
  c.m_max = j.at("corrector.m_max").get<int>();
  c.checks = j.at("checks").get<std::vector<std::string>>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json sample_spec_to_json(const SampleSpec& s) {
  json j;
  j["dim"] = s.dim;
  j["count"] = s.count;
  j["radius"] = s.radius;
  j["distribution"] = to_string(s.distribution);
  j["seed"] = s.seed;
  return j;
}

SampleSpec sample_spec_from_json(const json& j) {
  SampleSpec s;
  s.dim = j.at("dim").get<int>();
  s.count = j.at("count").get<int>();
  s.radius = j.at("radius").get<double>();
  s.distribution = distribution_from_string(j.at("distribution").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

json tuple_to_json(const DefectTuple& t) {
  json j;
  j["mu"] = json::array({t.mu.value.real(), t.mu.value.imag()});
  j["x"] = element_to_json(t.x);
  j["y"] = element_to_json(t.y);
  j["a"] = element_to_json(t.a);
  j["w"] = t.w ? element_to_json(*t.w) : json(nullptr);
  return j;
}

DefectTuple tuple_from_json(const json& j) {
  UnitScalar mu(Complex(j.at("mu").at(0).get<double>(),
                        j.at("mu").at(1).get<double>()));
  DefectTuple t{mu, element_from_json(j.at("x")), element_from_json(j.at("y")),
                element_from_json(j.at("a")), std::nullopt};
  if (!j.at("w").is_null()) t.w = element_from_json(j.at("w"));
  return t;
}

json theta_fit_to_json(const ThetaFit& fit) {
  json j;
  j["theta_hat"] = num_or_inf(fit.theta_hat);
  j["shape"] = to_string(fit.shape);
  j["exponent"] = fit.exponent;
  j["cloud"] = fit.cloud ? sample_spec_to_json(*fit.cloud) : json(nullptr);
  j["max_ratio_point"] =
      fit.max_ratio_point ? tuple_to_json(*fit.max_ratio_point) : json(nullptr);
  return j;
}

ThetaFit theta_fit_from_json(const json& j) {
  ThetaFit fit;
  fit.theta_hat = parse_num_or_inf(j.at("theta_hat"));
  fit.shape = control_shape_from_string(j.at("shape").get<std::string>());
  fit.exponent = j.at("exponent").get<double>();
  if (!j.at("cloud").is_null()) fit.cloud = sample_spec_from_json(j.at("cloud"));
  if (!j.at("max_ratio_point").is_null()) {
    fit.max_ratio_point = tuple_from_json(j.at("max_ratio_point"));
  }
  return fit;
}

json check_to_json(const CheckReport& c) {
  json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["max_violation"] = num_or_inf(c.max_violation);
  j["samples_used"] = c.samples_used;
  json rows = json::array();
  for (const CheckRow& row : c.rows) {
    rows.push_back(json::array(
        {num_or_inf(row.value), num_or_inf(row.bound), num_or_inf(row.ratio)}));
  }
  j["rows"] = std::move(rows);
  if (c.violating_point) {
    json pts = json::array();
    for (const Element& e : *c.violating_point) pts.push_back(element_to_json(e));
    j["violating_point"] = std::move(pts);
  } else {
    j["violating_point"] = nullptr;
  }
  return j;
}

CheckReport check_from_json(const json& j) {
  CheckReport c;
  c.name = j.at("name").get<std::string>();
  c.pass = j.at("pass").get<bool>();
  c.max_violation = parse_num_or_inf(j.at("max_violation"));
  c.samples_used = j.at("samples_used").get<int>();
  for (const json& row : j.at("rows")) {
    c.rows.push_back(CheckRow{parse_num_or_inf(row.at(0)),
                              parse_num_or_inf(row.at(1)),
                              parse_num_or_inf(row.at(2))});
  }
  if (!j.at("violating_point").is_null()) {
    std::vector<Element> pts;
    for (const json& e : j.at("violating_point")) pts.push_back(element_from_json(e));
    c.violating_point = std::move(pts);
  }
  return c;
}

json report_to_json(const Report& r) {
  json j;
  j["config"] = config_to_json(r.config);
  j["theta_fit"] = r.theta_fit ? theta_fit_to_json(*r.theta_fit) : json(nullptr);
  json checks = json::array();
  for (const CheckReport& c : r.checks) checks.push_back(check_to_json(c));
  j["checks"] = std::move(checks);
  json corr;
  corr["median_iterations"] = r.correction.median_iterations;
  corr["rate_estimate"] = r.correction.rate_estimate
                              ? json(*r.correction.rate_estimate)
                              : json(nullptr);
  corr["non_converged"] = r.correction.non_converged;
  corr["overflowed"] = r.correction.overflowed;
  j["correction"] = std::move(corr);
  if (r.bound) {
    json cert;
    json entries = json::array();
    for (const BoundCertificateEntry& e : r.bound->entries) {
      json entry;
      entry["label"] = e.label;
      entry["constant"] = num_or_inf(e.constant);
      entry["max_ratio"] = num_or_inf(e.max_ratio);
      entry["pass"] = e.pass;
      entries.push_back(std::move(entry));
    }
    cert["entries"] = std::move(entries);
    cert["pass"] = r.bound->pass;
    j["bound"] = std::move(cert);
  } else {
    j["bound"] = nullptr;
  }
  j["wall_time_ms"] = r.wall_time_ms;
  j["version"] = r.version;
  j["pass"] = r.pass;
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  r.config = config_from_json(j.at("config"));
  if (!j.at("theta_fit").is_null()) {
    r.theta_fit = theta_fit_from_json(j.at("theta_fit"));
  }
  for (const json& c : j.at("checks")) r.checks.push_back(check_from_json(c));
  const json& corr = j.at("correction");
  r.correction.median_iterations = corr.at("median_iterations").get<int>();
  if (!corr.at("rate_estimate").is_null()) {
    r.correction.rate_estimate = corr.at("rate_estimate").get<double>();
  }
  r.correction.non_converged = corr.at("non_converged").get<int>();
  r.correction.overflowed = corr.at("overflowed").get<int>();
  if (!j.at("bound").is_null()) {
    BoundCertificate cert;
    for (const json& e : j.at("bound").at("entries")) {
      cert.entries.push_back(BoundCertificateEntry{
          e.at("label").get<std::string>(), parse_num_or_inf(e.at("constant")),
          parse_num_or_inf(e.at("max_ratio")), e.at("pass").get<bool>()});
    }
    cert.pass = j.at("bound").at("pass").get<bool>();
    r.bound = std::move(cert);
  }
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  r.version = j.at("version").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  return r;
}

std::string fmt(double v) { return num_or_inf(v).dump(); }

std::string csv_tables(const Report& r) {
  std::ostringstream os;
  for (const CheckReport& c : r.checks) {
    os << "# check: " << c.name << "\n";
    os << "index,value,bound,ratio\n";
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      os << i << ',' << fmt(c.rows[i].value) << ',' << fmt(c.rows[i].bound)
         << ',' << fmt(c.rows[i].ratio) << "\n";
    }
    os << "\n";
  }
  return os.str();
}

std::string text_summary(const Report& r) {
  std::ostringstream os;
  os << "scenario " << to_string(r.config.variant) << " (dim=" << r.config.dim
     << ", n=" << r.config.n << ", seed=" << r.config.seed
     << ", version=" << r.version << ")\n";
  if (r.theta_fit) {
    os << "theta_fit: theta_hat=" << fmt(r.theta_fit->theta_hat)
       << " shape=" << to_string(r.theta_fit->shape)
       << " exponent=" << fmt(r.theta_fit->exponent) << "\n";
  }
  os << "correction: median_iterations=" << r.correction.median_iterations
     << " rate_estimate="
     << (r.correction.rate_estimate ? fmt(*r.correction.rate_estimate) : "n/a")
     << " non_converged=" << r.correction.non_converged
     << " overflowed=" << r.correction.overflowed << "\n";
  if (r.bound) {
    for (const BoundCertificateEntry& e : r.bound->entries) {
      os << "bound constant (" << e.label << "): " << fmt(e.constant)
         << " max_ratio=" << fmt(e.max_ratio) << "\n";
    }
  }
  for (const CheckReport& c : r.checks) {
    os << "check " << c.name << ": max_violation=" << fmt(c.max_violation)
       << " samples=" << c.samples_used << ' ' << (c.pass ? "PASS" : "FAIL")
       << "\n";
  }
  os << "overall: " << (r.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace

ReportFormat report_format_from_string(const std::string& tag) {
  if (tag == "json") return ReportFormat::Json;
  if (tag == "csv") return ReportFormat::CsvTables;
  if (tag == "text") return ReportFormat::TextSummary;
  throw ConfigError("unknown report format '" + tag + "'");
}

std::string render_report(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return report_to_json(report).dump(2) + "\n";
    case ReportFormat::CsvTables: return csv_tables(report);
    case ReportFormat::TextSummary: return text_summary(report);
  }
  throw Error("render_report: unknown format");
}

Report parse_report(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("parse_report: ") + e.what());
  }
  try {
    return report_from_json(j);
  } catch (const json::exception& e) {
    throw Error(std::string("parse_report: ") + e.what());
  }
}

void emit_report(const Report& report, ReportFormat format,
                 const std::string& path) {
  const std::string text = render_report(report, format);
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string render_config(const ScenarioConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

std::string render_defect_stats(const DefectStats& stats, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["config"] = config_to_json(stats.config);
    j["theta_fit"] = theta_fit_to_json(stats.theta_fit);
    j["max_jensen"] = num_or_inf(stats.max_jensen);
    j["max_njordan"] = num_or_inf(stats.max_njordan);
    j["max_star"] = num_or_inf(stats.max_star);
    j["max_combined"] = num_or_inf(stats.max_combined);
    json scaling;
    scaling["pass"] = stats.scaling.pass;
    scaling["worst_ratio"] = num_or_inf(stats.scaling.worst_ratio);
    j["scaling"] = std::move(scaling);
    j["version"] = stats.version;
    return j.dump(2) + "\n";
  }
  if (format == ReportFormat::CsvTables) {
    std::ostringstream os;
    os << "metric,value\n";
    os << "theta_hat," << fmt(stats.theta_fit.theta_hat) << "\n";
    os << "max_jensen," << fmt(stats.max_jensen) << "\n";
    os << "max_njordan," << fmt(stats.max_njordan) << "\n";
    os << "max_star," << fmt(stats.max_star) << "\n";
    os << "max_combined," << fmt(stats.max_combined) << "\n";
    os << "scaling_worst_ratio," << fmt(stats.scaling.worst_ratio) << "\n";
    return os.str();
  }
  std::ostringstream os;
  os << "defects for " << to_string(stats.config.variant)
     << " (dim=" << stats.config.dim << ", n=" << stats.config.n << ")\n";
  os << "theta_hat: " << fmt(stats.theta_fit.theta_hat) << "\n";
  os << "max jensen: " << fmt(stats.max_jensen) << "\n";
  os << "max njordan: " << fmt(stats.max_njordan) << "\n";
  os << "max star: " << fmt(stats.max_star) << "\n";
  os << "max combined: " << fmt(stats.max_combined) << "\n";
  os << "scaling law: worst_ratio=" << fmt(stats.scaling.worst_ratio) << ' '
     << (stats.scaling.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string render_correct_only(const CorrectOnly& result, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["config"] = config_to_json(result.config);
    json corr;
    corr["median_iterations"] = result.summary.median_iterations;
    corr["rate_estimate"] = result.summary.rate_estimate
                                ? json(*result.summary.rate_estimate)
                                : json(nullptr);
    corr["non_converged"] = result.summary.non_converged;
    corr["overflowed"] = result.summary.overflowed;
    j["summary"] = std::move(corr);
    json points = json::array();
    for (const PointDiagnostics& p : result.points) {
      json pj;
      pj["iterations"] = p.iterations;
      pj["converged"] = p.converged;
      pj["overflowed"] = p.overflowed;
      pj["last_residual"] =
          p.residuals.empty() ? json(nullptr) : num_or_inf(p.residuals.back());
      points.push_back(std::move(pj));
    }
    j["points"] = std::move(points);
    j["version"] = result.version;
    return j.dump(2) + "\n";
  }
  if (format == ReportFormat::CsvTables) {
    std::ostringstream os;
    os << "index,iterations,converged,overflowed,last_residual\n";
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      const PointDiagnostics& p = result.points[i];
      os << i << ',' << p.iterations << ',' << (p.converged ? 1 : 0) << ','
         << (p.overflowed ? 1 : 0) << ','
         << (p.residuals.empty() ? "n/a" : fmt(p.residuals.back())) << "\n";
    }
    return os.str();
  }
  std::ostringstream os;
  os << "correction for " << to_string(result.config.variant)
     << " (dim=" << result.config.dim << ")\n";
  os << "median iterations: " << result.summary.median_iterations << "\n";
  os << "rate estimate: "
     << (result.summary.rate_estimate ? fmt(*result.summary.rate_estimate)
                                      : "n/a")
     << "\n";
  os << "non-converged: " << result.summary.non_converged << "\n";
  os << "overflowed: " << result.summary.overflowed << "\n";
  return os.str();
}

}  // namespace njstab
