#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fubini/report.hpp"
#include "fubini/sequences.hpp"

namespace fubini::experiments {

struct ExperimentConfig {
  std::string experiment;
  std::optional<long long> max_n;
  std::optional<int> max_m_exp;
  std::optional<unsigned> p;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<unsigned> t_points;
  std::optional<sequences::RationalAngle> theta;
  std::optional<std::string> mode;  // direct | block_analytic
  std::optional<std::string> output;
  std::string format = "json";      // json | csv
  std::map<std::string, double> tolerances;

  // Effective configuration, embedded in every report.
  report::Json to_json() const;
  // Reads the keys written by to_json; unknown keys are a ConfigurationError.
  static ExperimentConfig from_json(const report::Json& j);
  // Fields set in `flags` replace those of *this; an empty format is unset.
  ExperimentConfig overridden_by(const ExperimentConfig& flags) const;
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> tolerance_keys;
};

const std::vector<ExperimentInfo>& registry();
const ExperimentInfo* find_experiment(const std::string& name);

// Throws ConfigurationError or RangeError on an invalid config.
void validate(const ExperimentConfig& config);

report::ExperimentResult run_experiment(const ExperimentConfig& config);
// Every experiment but "suite", in registry order, with default parameters and
// the tolerance overrides that apply to each.
std::vector<report::ExperimentResult> run_suite(const ExperimentConfig& config);

// The report text for a single experiment or for a suite run.
std::string render(const ExperimentConfig& config, const std::vector<report::ExperimentResult>& results);
// Fixed-width PASS/FAIL table for the console.
std::string check_summary(const std::vector<report::ExperimentResult>& results);

}  // namespace fubini::experiments
