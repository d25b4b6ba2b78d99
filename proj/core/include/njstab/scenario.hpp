#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "njstab/verify.hpp"

namespace njstab {

/// Declarative description of one experiment, parsed from a flat
/// `key.path = value` text file. Matrix-valued fields hold either a
/// row-major list of complex entries ("re,im re,im ...") or a generator
/// tag "@gaussian[:scale]" / "@hermitian[:scale]" / "@skew[:scale]"
/// (normalized to op_norm = scale, default 1, drawn deterministically
/// from the scenario seed).
struct ScenarioConfig {
  int dim = 2;

  std::string derivation_kind = "inner";
  std::string derivation_b = "@gaussian";
  bool skew_adjoint = false;

  std::string perturbation_shape = "none";  // none|power|bounded|constant-shift|odd-power
  double theta_prime = 0.0;
  double perturbation_p = 0.5;
  double cap = 0.0;
  std::string direction = "@hermitian";
  bool star_compatible = false;

  int n = 2;
  Variant variant = Variant::Thm21;

  ControlShape control_shape = ControlShape::PowerSum;
  std::optional<double> control_theta;  ///< explicit theta; absent => fitted
  double control_exponent = 0.5;        ///< p or r

  int cloud_count = 100;
  double cloud_radius = 1.0;
  Distribution cloud_distribution = Distribution::DenseGaussian;

  int mu_grid = 8;
  double tolerance = 1e-10;
  int m_max = 60;

  std::vector<std::string> checks;
  std::uint64_t seed = 0;
};

/// Parse + validate a config file. Unknown keys, missing required fields
/// and out-of-range values raise ConfigError with the field path.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Materialized maps and samples of a scenario.
struct BuiltScenario {
  Element b;
  AlgebraMap truth;  ///< the exact inner derivation
  AlgebraMap f;      ///< truth + configured disturbance
  std::vector<Element> cloud;
};

BuiltScenario build_scenario(const ScenarioConfig& config);

/// Parse a matrix field (literal entries or generator tag).
Element materialize_matrix(const std::string& source, int dim, std::uint64_t seed,
                           const std::string& field);

struct CorrectionSummary {
  int median_iterations = 0;
  std::optional<double> rate_estimate;  ///< median per-point rate
  int non_converged = 0;
  int overflowed = 0;
};

struct BoundCertificateEntry {
  std::string label;  ///< "stated" or "proof-consistent"
  double constant = 0.0;
  double max_ratio = 0.0;  ///< max ||f-D|| / B(x) over the cloud
  bool pass = false;
};

struct BoundCertificate {
  std::vector<BoundCertificateEntry> entries;
  bool pass = false;
};

struct Report {
  ScenarioConfig config;
  std::optional<ThetaFit> theta_fit;
  std::vector<CheckReport> checks;
  CorrectionSummary correction;
  std::optional<BoundCertificate> bound;
  double wall_time_ms = 0.0;
  std::string version;
  bool pass = false;
};

/// Runs the full pipeline: build maps, fit theta, correct over the cloud,
/// run the requested checks, assemble the certificate. Deterministic given
/// (config, seed); per-point overflow is recorded and the scenario
/// continues.
Report run_scenario(const ScenarioConfig& config);

/// Defect statistics only (the `defect` subcommand).
struct DefectStats {
  ScenarioConfig config;
  ThetaFit theta_fit;
  double max_jensen = 0.0, max_njordan = 0.0, max_star = 0.0, max_combined = 0.0;
  ScalingReport scaling;
  std::string version;
};
DefectStats run_defect_stats(const ScenarioConfig& config);

/// Corrector diagnostics only (the `correct` subcommand).
struct CorrectOnly {
  ScenarioConfig config;
  CorrectionSummary summary;
  std::vector<PointDiagnostics> points;
  std::string version;
};
CorrectOnly run_correct_only(const ScenarioConfig& config);

}  // namespace njstab
