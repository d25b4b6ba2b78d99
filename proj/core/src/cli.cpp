#include "njstab/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "njstab/report.hpp"
#include "njstab/version.hpp"

namespace njstab {

namespace {

struct CommonOptions {
  std::string format = "json";
  std::string out = "-";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format: json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--out", opts.out, "Output path ('-' for stdout)");
  cmd->add_option("--seed", opts.seed, "Override the config seed");
  cmd->add_flag("--quiet", opts.quiet, "Suppress the stdout summary");
}

ScenarioConfig load(const std::string& path, const CommonOptions& opts) {
  ScenarioConfig config = load_config(path);
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

void write_text(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

int run_command(const std::string& config_path, const CommonOptions& opts) {
  ScenarioConfig config = load(config_path, opts);
  Report report = run_scenario(config);
  ReportFormat format = report_format_from_string(opts.format);
  if (opts.out != "-") {
    emit_report(report, format, opts.out);
    if (!opts.quiet) {
      std::cout << render_report(report, ReportFormat::TextSummary);
    }
  } else if (!opts.quiet) {
    std::cout << render_report(report, format);
  }
  return report.pass ? 0 : 1;
}

int defect_command(const std::string& config_path, const CommonOptions& opts) {
  ScenarioConfig config = load(config_path, opts);
  DefectStats stats = run_defect_stats(config);
  write_text(render_defect_stats(stats, report_format_from_string(opts.format)),
             opts.out);
  return 0;
}

int correct_command(const std::string& config_path, const CommonOptions& opts) {
  ScenarioConfig config = load(config_path, opts);
  CorrectOnly result = run_correct_only(config);
  write_text(render_correct_only(result, report_format_from_string(opts.format)),
             opts.out);
  return 0;
}

int constants_command(const std::string& variant_tag,
                      const std::vector<std::string>& params,
                      const CommonOptions& opts) {
  Variant variant = variant_from_string(variant_tag);
  double theta = 1.0, exponent = 0.0, lipschitz = 0.0;
  bool have_exponent = false, have_lipschitz = false;
  for (const std::string& p : params) {
    std::size_t eq = p.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("constants: parameter '" + p + "' is not key=value");
    }
    std::string key = p.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t pos = 0;
      value = std::stod(p.substr(eq + 1), &pos);
      if (pos != p.size() - eq - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("constants: bad value in '" + p + "'");
    }
    if (key == "theta") {
      theta = value;
    } else if (key == "p" || key == "r") {
      exponent = value;
      have_exponent = true;
    } else if (key == "L") {
      lipschitz = value;
      have_lipschitz = true;
    } else {
      throw ConfigError("constants: unknown parameter '" + key + "'");
    }
  }

  nlohmann::json out;
  out["variant"] = variant_tag;
  switch (variant) {
    case Variant::Thm21:
    case Variant::Thm22:
    case Variant::Thm25:
    case Variant::Thm27: {
      if (!have_lipschitz) throw ConfigError("constants: " + variant_tag + " needs L=<value>");
      BoundSpec spec;
      spec.kind = variant;
      spec.lipschitz = lipschitz;
      out["constant"] = bound_constant(spec);
      break;
    }
    case Variant::Cor23:
    case Variant::Cor24: {
      if (!have_exponent) throw ConfigError("constants: " + variant_tag + " needs p=<value>");
      out["constant"] = bound_constant(BoundSpec::cor23(theta, exponent));
      break;
    }
    case Variant::Cor26:
    case Variant::Cor28:
    case Variant::Cor210: {
      if (!have_exponent) throw ConfigError("constants: " + variant_tag + " needs r=<value>");
      out["stated"] = bound_constant(
          BoundSpec::cor26(theta, exponent, BoundDenominator::Stated));
      out["proof_consistent"] = bound_constant(
          BoundSpec::cor26(theta, exponent, BoundDenominator::ProofConsistent));
      break;
    }
  }

  std::string text;
  if (opts.format == "json") {
    text = out.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "variant: " << variant_tag << "\n";
    for (const auto& [key, value] : out.items()) {
      if (key != "variant") os << key << ": " << value.dump() << "\n";
    }
    text = os.str();
  }
  write_text(text, opts.out);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"numerical stability laboratory for approximate matrix-algebra "
               "derivations"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions opts;

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Run a full scenario");
  run->add_option("config", run_config, "Scenario config file")->required();
  add_common(run, opts);

  std::string defect_config;
  CLI::App* defect = app.add_subcommand("defect", "Defect statistics only");
  defect->add_option("config", defect_config, "Scenario config file")->required();
  add_common(defect, opts);

  std::string correct_config;
  CLI::App* correct = app.add_subcommand("correct", "Corrector diagnostics only");
  correct->add_option("config", correct_config, "Scenario config file")->required();
  add_common(correct, opts);

  std::string constants_variant;
  std::vector<std::string> constants_params;
  CLI::App* constants =
      app.add_subcommand("constants", "Print certificate bound constants");
  constants->add_option("variant", constants_variant, "Scenario family")->required();
  constants->add_option("params", constants_params, "key=value parameters");
  add_common(constants, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(run_config, opts);
    if (defect->parsed()) return defect_command(defect_config, opts);
    if (correct->parsed()) return correct_command(correct_config, opts);
    if (constants->parsed()) {
      return constants_command(constants_variant, constants_params, opts);
    }
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace njstab
