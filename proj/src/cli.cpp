#include "fubini/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fubini/errors.hpp"
#include "fubini/experiments.hpp"

namespace fubini::cli {

namespace {

experiments::ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigurationError("cannot read config file " + path);
  report::Json j;
  try {
    j = report::Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError("config file " + path + ": " + e.what());
  }
  return experiments::ExperimentConfig::from_json(j);
}

std::string experiment_list() {
  std::string s;
  for (const auto& e : experiments::registry()) s += "  " + e.name + ": " + e.summary + "\n";
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"Numerical checks of trace formulas on explicit spectral data"};
  app.footer("Experiments:\n" + experiment_list());
  experiments::ExperimentConfig flags;
  flags.format.clear();
  std::string config_path;
  std::string theta_text;
  std::vector<std::string> tolerance_items;
  long long max_n = 0;
  int max_m_exp = 0;
  unsigned p = 0, t_points = 0;
  double t_min = 0, t_max = 0;
  std::string mode, output;

  app.add_option("--experiment", flags.experiment, "experiment name");
  app.add_option("--config", config_path, "JSON config file; flags take precedence");
  auto* o_max_n = app.add_option("--max-n", max_n, "largest n or radius");
  auto* o_max_m = app.add_option("--max-m-exp", max_m_exp, "largest dyadic exponent");
  auto* o_p = app.add_option("--p", p, "dimension / exponent p");
  auto* o_theta = app.add_option("--theta", theta_text, "angle p/q meaning 2 pi p/q");
  auto* o_mode = app.add_option("--mode", mode, "direct or block_analytic");
  auto* o_t_min = app.add_option("--t-min", t_min, "smallest t");
  auto* o_t_max = app.add_option("--t-max", t_max, "largest t");
  auto* o_t_points = app.add_option("--t-points", t_points, "number of t samples");
  auto* o_output = app.add_option("--output", output, "report path (stdout when omitted)");
  app.add_option("--format", flags.format, "json or csv");
  app.add_option("--tolerance", tolerance_items, "key=value tolerance override (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  experiments::ExperimentConfig config;
  try {
    if (*o_max_n) flags.max_n = max_n;
    if (*o_max_m) flags.max_m_exp = max_m_exp;
    if (*o_p) flags.p = p;
    if (*o_theta) flags.theta = sequences::RationalAngle::parse(theta_text);
    if (*o_mode) flags.mode = mode;
    if (*o_t_min) flags.t_min = t_min;
    if (*o_t_max) flags.t_max = t_max;
    if (*o_t_points) flags.t_points = t_points;
    if (*o_output) flags.output = output;
    for (const auto& item : tolerance_items) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigurationError("tolerance must be key=value: " + item);
      std::size_t used = 0;
      const std::string value = item.substr(eq + 1);
      double v = 0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) throw ConfigurationError("tolerance value is not a number: " + item);
      flags.tolerances[item.substr(0, eq)] = v;
    }
    config = config_path.empty() ? experiments::ExperimentConfig{} : load_config_file(config_path);
    config = config.overridden_by(flags);
    if (config.format.empty()) config.format = "json";
    if (config.experiment.empty()) throw ConfigurationError("--experiment is required");
    experiments::validate(config);
  } catch (const std::exception& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<report::ExperimentResult> results;
  try {
    if (config.experiment == "suite") {
      results = experiments::run_suite(config);
    } else {
      results.push_back(experiments::run_experiment(config));
    }
  } catch (const ConfigurationError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }

  const std::string text = experiments::render(config, results);
  try {
    if (config.output) {
      report::write_file(*config.output, text);
    } else {
      out << text;
    }
  } catch (const IoError& e) {
    log << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  log << experiments::check_summary(results);
  bool all = true;
  for (const auto& r : results) all = all && r.passed();
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace fubini::cli
