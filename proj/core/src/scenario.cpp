#include "njstab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "njstab/version.hpp"

namespace njstab {

namespace {

constexpr std::uint64_t kDerivationSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kDirectionSalt = 0xc2b2ae3d27d4eb4fULL;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

/// Raw key/value view of a config file with typed, path-reporting access.
class ConfigMap {
 public:
  explicit ConfigMap(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config line without '=': '" + line + "'");
      }
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("config line with empty key");
      if (!values_.emplace(key, value).second) {
        throw ConfigError(key + ": duplicate key");
      }
    }
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback) {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    used_.insert(key);
    return it->second;
  }

  std::string required(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key + ": required field missing");
    used_.insert(key);
    return it->second;
  }

  double real(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return parse_real(key, required(key));
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const std::string v = required(key);
    try {
      std::size_t pos = 0;
      long long parsed = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return static_cast<int>(parsed);
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected integer, got '" + v + "'");
    }
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const std::string v = required(key);
    try {
      std::size_t pos = 0;
      std::uint64_t parsed = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return parsed;
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected unsigned integer, got '" + v + "'");
    }
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = required(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected boolean, got '" + v + "'");
  }

  double parse_real(const std::string& key, const std::string& v) const {
    try {
      std::size_t pos = 0;
      double parsed = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return parsed;
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected real number, got '" + v + "'");
    }
  }

  void reject_unknown() const {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) throw ConfigError(key + ": unknown key");
      (void)value;
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

ControlShape default_control_shape(Variant v) {
  if (variant_is_product_power(v)) {
    return variant_is_star(v) ? ControlShape::ProductPowerStar
                              : ControlShape::ProductPower;
  }
  return variant_is_star(v) ? ControlShape::PowerSumStar
                            : ControlShape::PowerSum;
}

bool control_shape_is_star(ControlShape s) {
  return s == ControlShape::PowerSumStar || s == ControlShape::ProductPowerStar;
}

bool control_shape_is_product(ControlShape s) {
  return s == ControlShape::ProductPower || s == ControlShape::ProductPowerStar;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "additivity", "homogeneity", "njordan", "star", "leibniz", "bound"};
  return names;
}

ControlFunction make_control(ControlShape shape, double theta, double exponent) {
  switch (shape) {
    case ControlShape::PowerSum: return ControlFunction::power_sum(theta, exponent);
    case ControlShape::ProductPower:
      return ControlFunction::product_power(theta, exponent);
    case ControlShape::PowerSumStar:
      return ControlFunction::power_sum_star(theta, exponent);
    case ControlShape::ProductPowerStar:
      return ControlFunction::product_power_star(theta, exponent);
    case ControlShape::Custom:
      throw ConfigError("control.shape: custom controls cannot be configured");
  }
  throw ConfigError("control.shape: unknown");
}

BoundSpec make_bound_spec(const ScenarioConfig& config, double theta,
                          BoundDenominator denom) {
  switch (config.variant) {
    case Variant::Thm21:
      return BoundSpec::thm21(
          make_control(config.control_shape, theta, config.control_exponent));
    case Variant::Thm22:
      return BoundSpec::thm22(
          make_control(config.control_shape, theta, config.control_exponent));
    case Variant::Thm25:
      return BoundSpec::thm25(
          make_control(config.control_shape, theta, config.control_exponent));
    case Variant::Thm27:
      return BoundSpec::thm27(
          make_control(config.control_shape, theta, config.control_exponent));
    case Variant::Cor23:
      return BoundSpec::cor23(theta, config.control_exponent);
    case Variant::Cor24:
      return BoundSpec::cor24(theta, config.control_exponent);
    case Variant::Cor26:
      return BoundSpec::cor26(theta, config.control_exponent, denom);
    case Variant::Cor28:
      return BoundSpec::cor28(theta, config.control_exponent, denom);
    case Variant::Cor210:
      return BoundSpec::cor210(theta, config.control_exponent, denom);
  }
  throw ConfigError("variant: unknown");
}

bool variant_is_theorem(Variant v) {
  switch (v) {
    case Variant::Thm21:
    case Variant::Thm22:
    case Variant::Thm25:
    case Variant::Thm27:
      return true;
    default:
      return false;
  }
}

double lower_median_int(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0 : v[(v.size() - 1) / 2];
}

double lower_median_real(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0.0 : v[(v.size() - 1) / 2];
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  ConfigMap map(text);
  ScenarioConfig c;

  c.dim = map.integer("algebra.dim", 2);
  if (c.dim < 1) throw ConfigError("algebra.dim: must be >= 1");

  c.derivation_kind = map.str("derivation.kind", "inner");
  if (c.derivation_kind != "inner") {
    throw ConfigError("derivation.kind: only 'inner' is supported, got '" +
                      c.derivation_kind + "'");
  }
  c.derivation_b = map.str("derivation.b", "@gaussian");
  c.skew_adjoint = map.boolean("derivation.skew_adjoint", false);

  c.perturbation_shape = map.str("perturbation.shape", "none");
  static const std::vector<std::string> shapes = {
      "none", "power", "bounded", "constant-shift", "odd-power"};
  if (std::find(shapes.begin(), shapes.end(), c.perturbation_shape) ==
      shapes.end()) {
    throw ConfigError("perturbation.shape: unknown shape '" +
                      c.perturbation_shape + "'");
  }
  c.theta_prime = map.real("perturbation.theta_prime", 0.0);
  if (c.theta_prime < 0) throw ConfigError("perturbation.theta_prime: must be >= 0");
  c.perturbation_p = map.real("perturbation.p", 0.5);
  c.cap = map.real("perturbation.c", 0.0);
  if (c.cap < 0) throw ConfigError("perturbation.c: must be >= 0");
  c.direction = map.str("perturbation.direction", "@hermitian");
  c.star_compatible = map.boolean("perturbation.star_compatible", false);

  c.variant = variant_from_string(map.required("variant"));
  c.n = map.integer("n", 2);
  if (c.n < 2) throw ConfigError("n: must be >= 2");
  if (c.variant == Variant::Cor210 && c.n != 2) {
    throw ConfigError("n: cor210 requires n = 2");
  }

  c.control_shape = map.has("control.shape")
                        ? control_shape_from_string(map.required("control.shape"))
                        : default_control_shape(c.variant);
  if (control_shape_is_star(c.control_shape) != variant_is_star(c.variant)) {
    throw ConfigError("control.shape: arity does not match variant " +
                      to_string(c.variant));
  }
  if (!variant_is_theorem(c.variant) &&
      control_shape_is_product(c.control_shape) !=
          variant_is_product_power(c.variant)) {
    throw ConfigError("control.shape: '" + to_string(c.control_shape) +
                      "' does not match variant " + to_string(c.variant));
  }

  const bool product = control_shape_is_product(c.control_shape);
  if (map.has("control.p") && map.has("control.r")) {
    throw ConfigError("control.p: give either control.p or control.r, not both");
  }
  c.control_exponent =
      map.real("control.p", map.real("control.r", product ? 0.25 : 0.5));
  if (map.has("control.theta")) {
    double theta = map.real("control.theta", 0.0);
    if (theta < 0) throw ConfigError("control.theta: must be >= 0");
    c.control_theta = theta;
  } else if (variant_is_theorem(c.variant)) {
    throw ConfigError(
        "control.theta: required for theorem variants (corollary variants fit "
        "it from the cloud)");
  }
  // Range check via the constructors, reported on the config field.
  try {
    make_control(c.control_shape, c.control_theta.value_or(1.0),
                 c.control_exponent);
  } catch (const DomainError& e) {
    throw ConfigError(std::string(product ? "control.r" : "control.p") + ": " +
                      e.what());
  }

  c.cloud_count = map.integer("cloud.count", 100);
  if (c.cloud_count < 1) throw ConfigError("cloud.count: must be >= 1");
  c.cloud_radius = map.real("cloud.radius", 1.0);
  if (!(c.cloud_radius > 0)) throw ConfigError("cloud.radius: must be > 0");
  c.cloud_distribution =
      distribution_from_string(map.str("cloud.distribution", "dense-gaussian"));

  c.mu_grid = map.integer("mu_grid", 8);
  if (c.mu_grid < 1) throw ConfigError("mu_grid: must be >= 1");
  c.tolerance = map.real("corrector.tolerance", 1e-10);
  if (!(c.tolerance > 0)) throw ConfigError("corrector.tolerance: must be > 0");
  c.m_max = map.integer("corrector.m_max", 60);
  if (c.m_max < 1 || c.m_max > 60) {
    throw ConfigError("corrector.m_max: must be in [1,60]");
  }

  c.checks = split(map.required("checks"), ',');
  c.checks.erase(std::remove(c.checks.begin(), c.checks.end(), ""),
                 c.checks.end());
  if (c.checks.empty()) throw ConfigError("checks: must name at least one check");
  for (const std::string& name : c.checks) {
    const auto& known = known_checks();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError("checks: unknown check '" + name + "'");
    }
  }
  if (c.variant == Variant::Cor210 &&
      std::find(c.checks.begin(), c.checks.end(), "star") == c.checks.end()) {
    c.checks.push_back("star");  // cor210 always certifies star preservation
  }

  c.seed = map.unsigned64("seed", 0);

  map.reject_unknown();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

Element materialize_matrix(const std::string& source, int dim, std::uint64_t seed,
                           const std::string& field) {
  if (source.empty()) throw ConfigError(field + ": empty matrix source");
  if (source[0] == '@') {
    std::string tag = source.substr(1);
    double scale = 1.0;
    std::size_t colon = tag.find(':');
    if (colon != std::string::npos) {
      try {
        std::size_t pos = 0;
        scale = std::stod(tag.substr(colon + 1), &pos);
        if (pos != tag.size() - colon - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ConfigError(field + ": bad generator scale in '" + source + "'");
      }
      tag = tag.substr(0, colon);
    }
    if (!(scale > 0)) throw ConfigError(field + ": generator scale must be > 0");
    Rng rng(seed);
    Element m;
    if (tag == "gaussian") {
      m = rng.element(dim, Distribution::DenseGaussian);
    } else if (tag == "hermitian") {
      m = rng.element(dim, Distribution::Hermitian);
    } else if (tag == "skew") {
      m = Complex(0.0, 1.0) * rng.element(dim, Distribution::Hermitian);
    } else {
      throw ConfigError(field + ": unknown generator tag '@" + tag + "'");
    }
    double nrm = op_norm(m);
    if (nrm == 0.0) throw ConfigError(field + ": degenerate generator draw");
    return m * (scale / nrm);
  }

  // Literal: dim^2 whitespace-separated "re,im" entries, row-major.
  std::istringstream is(source);
  std::vector<Complex> entries;
  std::string token;
  while (is >> token) {
    std::size_t comma = token.find(',');
    if (comma == std::string::npos) {
      throw ConfigError(field + ": entry '" + token + "' is not 're,im'");
    }
    try {
      std::size_t pos = 0;
      double re = std::stod(token.substr(0, comma), &pos);
      if (pos != comma) throw std::invalid_argument("");
      std::string im_text = token.substr(comma + 1);
      double im = std::stod(im_text, &pos);
      if (pos != im_text.size()) throw std::invalid_argument("");
      entries.emplace_back(re, im);
    } catch (const std::exception&) {
      throw ConfigError(field + ": entry '" + token + "' is not 're,im'");
    }
  }
  if (entries.size() != static_cast<std::size_t>(dim) * dim) {
    throw ConfigError(field + ": expected " + std::to_string(dim * dim) +
                      " entries, got " + std::to_string(entries.size()));
  }
  Element m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      m(i, j) = entries[static_cast<std::size_t>(i) * dim + j];
  if (!is_finite(m)) throw ConfigError(field + ": non-finite entries");
  return m;
}

BuiltScenario build_scenario(const ScenarioConfig& config) {
  BuiltScenario built;
  built.b = materialize_matrix(config.derivation_b, config.dim,
                               config.seed ^ kDerivationSalt, "derivation.b");
  if (config.skew_adjoint &&
      op_norm(built.b + involution(built.b)) > 1e-9) {
    throw ConfigError("derivation.b: skew_adjoint is set but b* != -b");
  }
  built.truth = inner_derivation(built.b);

  if (config.perturbation_shape == "none") {
    built.f = built.truth;
  } else {
    PerturbationSpec spec;
    if (config.perturbation_shape == "odd-power") {
      spec = PerturbationSpec::odd_power(config.theta_prime, config.perturbation_p);
    } else {
      Element direction =
          materialize_matrix(config.direction, config.dim,
                             config.seed ^ kDirectionSalt, "perturbation.direction");
      if (config.perturbation_shape == "power") {
        spec = PerturbationSpec::power(config.theta_prime, config.perturbation_p,
                                       direction, config.star_compatible);
      } else if (config.perturbation_shape == "bounded") {
        spec = PerturbationSpec::bounded(config.cap, direction,
                                         config.star_compatible);
      } else {
        spec = PerturbationSpec::constant_shift(direction, config.star_compatible);
      }
    }
    built.f = perturb(built.truth, spec);
  }

  SampleSpec cloud_spec{config.dim, config.cloud_count, config.cloud_radius,
                        config.cloud_distribution, config.seed};
  built.cloud = sample_elements(cloud_spec);
  return built;
}

namespace {

CorrectionSummary summarize(const std::vector<PointDiagnostics>& points) {
  CorrectionSummary summary;
  std::vector<int> iterations;
  std::vector<double> rates;
  for (const PointDiagnostics& p : points) {
    if (p.overflowed) {
      ++summary.overflowed;
      continue;
    }
    iterations.push_back(p.iterations);
    if (!p.converged) ++summary.non_converged;
    try {
      rates.push_back(rate_estimate(p));
    } catch (const InsufficientDataError&) {
      // too short a trail to estimate; skip the point
    }
  }
  summary.median_iterations = static_cast<int>(lower_median_int(iterations));
  if (!rates.empty()) summary.rate_estimate = lower_median_real(rates);
  return summary;
}

std::vector<PointDiagnostics> correct_cloud(const AlgebraMap& f,
                                            const std::vector<Element>& cloud,
                                            double tolerance, int m_max) {
  std::vector<PointDiagnostics> points;
  points.reserve(cloud.size());
  for (const Element& x : cloud) {
    try {
      points.push_back(correct(f, x, tolerance, m_max));
    } catch (const OverflowError&) {
      PointDiagnostics p;
      p.x = x;
      p.overflowed = true;
      p.final_value = Element::Zero(x.rows(), x.cols());
      points.push_back(std::move(p));
    }
  }
  return points;
}

double certificate_max_ratio(const CheckReport& report) {
  double worst = 0.0;
  for (const CheckRow& row : report.rows) {
    if (row.bound > 0.0) {
      worst = std::max(worst, row.value / row.bound);
    } else if (row.value > 1e-12) {
      worst = std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

}  // namespace

Report run_scenario(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();

  Report report;
  report.config = config;
  report.version = kVersion;

  BuiltScenario built = build_scenario(config);
  const ControlFunction unit_control =
      make_control(config.control_shape, 1.0, config.control_exponent);
  const TupleScheme scheme = variant_is_odd(config.variant)
                                 ? TupleScheme::JensenAnchored3x
                                 : TupleScheme::General;

  ThetaFit fit = fit_theta_over(built.f, unit_control, built.cloud,
                                config.mu_grid, config.n, scheme);
  fit.cloud = SampleSpec{config.dim, config.cloud_count, config.cloud_radius,
                         config.cloud_distribution, config.seed};
  report.theta_fit = fit;
  const double theta_effective = config.control_theta.value_or(fit.theta_hat);

  std::vector<PointDiagnostics> points =
      correct_cloud(built.f, built.cloud, config.tolerance, config.m_max);
  report.correction = summarize(points);

  std::vector<Element> cloud_ok;
  for (const PointDiagnostics& p : points) {
    if (!p.overflowed) cloud_ok.push_back(p.x);
  }
  if (cloud_ok.empty()) {
    throw OverflowError("run_scenario: every cloud point overflowed");
  }
  std::vector<std::pair<Element, Element>> pairs;
  pairs.reserve(cloud_ok.size());
  for (std::size_t i = 0; i < cloud_ok.size(); ++i) {
    pairs.emplace_back(cloud_ok[i], cloud_ok[(i + 1) % cloud_ok.size()]);
  }

  AlgebraMap corrected = corrected_map(built.f, config.tolerance, config.m_max);
  const double tol =
      structure_tolerance(config.tolerance, config.cloud_radius, config.n);
  const std::vector<UnitScalar> mu_set = sample_unit_scalars(config.mu_grid);

  report.pass = true;
  for (const std::string& name : config.checks) {
    CheckReport check;
    if (name == "additivity") {
      check = check_additivity(corrected, pairs, tol);
    } else if (name == "homogeneity") {
      check = check_homogeneity(corrected, mu_set, cloud_ok, tol);
    } else if (name == "njordan") {
      check = check_njordan(corrected, config.n, cloud_ok, tol);
    } else if (name == "star") {
      check = check_star(corrected, cloud_ok, tol);
    } else if (name == "leibniz") {
      check = check_leibniz(corrected, pairs, tol);
    } else if (name == "bound") {
      BoundCertificate certificate;
      BoundSpec stated =
          make_bound_spec(config, theta_effective, BoundDenominator::Stated);
      check = check_bound(built.f, corrected, stated, cloud_ok);
      certificate.entries.push_back({"stated", bound_constant(stated),
                                     certificate_max_ratio(check), check.pass});
      if (variant_is_product_power(config.variant)) {
        BoundSpec alt = make_bound_spec(config, theta_effective,
                                        BoundDenominator::ProofConsistent);
        CheckReport alt_check = check_bound(built.f, corrected, alt, cloud_ok);
        certificate.entries.push_back({"proof-consistent", bound_constant(alt),
                                       certificate_max_ratio(alt_check),
                                       alt_check.pass});
      }
      certificate.pass = std::all_of(certificate.entries.begin(),
                                     certificate.entries.end(),
                                     [](const auto& e) { return e.pass; });
      report.bound = certificate;
      report.pass = report.pass && certificate.pass;
    } else {
      throw ConfigError("checks: unknown check '" + name + "'");
    }
    report.pass = report.pass && check.pass;
    report.checks.push_back(std::move(check));
  }

  const auto end = std::chrono::steady_clock::now();
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  return report;
}

DefectStats run_defect_stats(const ScenarioConfig& config) {
  DefectStats stats;
  stats.config = config;
  stats.version = kVersion;

  BuiltScenario built = build_scenario(config);
  const ControlFunction unit_control =
      make_control(config.control_shape, 1.0, config.control_exponent);
  const TupleScheme scheme = variant_is_odd(config.variant)
                                 ? TupleScheme::JensenAnchored3x
                                 : TupleScheme::General;
  stats.theta_fit = fit_theta_over(built.f, unit_control, built.cloud,
                                   config.mu_grid, config.n, scheme);
  stats.theta_fit.cloud =
      SampleSpec{config.dim, config.cloud_count, config.cloud_radius,
                 config.cloud_distribution, config.seed};

  const bool with_w = unit_control.arity == 4;
  std::vector<PhiArgs> phi_args;
  for (const DefectTuple& t : defect_tuples(built.cloud, config.mu_grid, with_w,
                                            scheme, config.dim)) {
    DefectSample s =
        evaluate_defects(built.f, t.mu, t.x, t.y, t.a, t.w, config.n);
    stats.max_jensen = std::max(stats.max_jensen, s.jensen);
    stats.max_njordan = std::max(stats.max_njordan, s.njordan);
    if (s.star) stats.max_star = std::max(stats.max_star, *s.star);
    stats.max_combined = std::max(stats.max_combined, s.combined);
    phi_args.push_back(PhiArgs{t.x, t.y, t.a, t.w});
  }
  stats.scaling = scaling_check(unit_control, phi_args);
  return stats;
}

CorrectOnly run_correct_only(const ScenarioConfig& config) {
  CorrectOnly result;
  result.config = config;
  result.version = kVersion;
  BuiltScenario built = build_scenario(config);
  result.points =
      correct_cloud(built.f, built.cloud, config.tolerance, config.m_max);
  result.summary = summarize(result.points);
  return result;
}

}  // namespace njstab
