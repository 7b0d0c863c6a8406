#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace fubini::report {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  std::string key;          // tolerance override key
  double value = 0.0;
  double bound = 0.0;
  std::string relation;     // "<=", ">=", ">", "<" or "=="
  bool passed = false;
  std::string provenance;
};

// Evaluates `value relation bound`; NaN never passes.
bool compare(double value, const std::string& relation, double bound);
Check make_check(std::string name, std::string key, double value, std::string relation, double bound,
                 std::string provenance);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentResult {
  std::string experiment;
  Json config = Json::object();
  std::vector<Check> checks;
  std::vector<std::string> conclusions;
  Json data = Json::object();
  Table table;

  bool passed() const;
};

// %.17g for finite doubles, null for non-finite ones.
std::string format_double(double v);
// Two-space indented JSON with 17 significant digits for floats.
std::string dump_json(const Json& j);
std::string to_csv(const Table& table);

Json check_json(const Check& c);
Json result_json(const ExperimentResult& r);
Table check_table(const std::vector<ExperimentResult>& results);

// Writes the whole string or throws IoError.
void write_file(const std::string& path, const std::string& contents);

}  // namespace fubini::report
