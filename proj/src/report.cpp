#include "fubini/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fubini/errors.hpp"

namespace fubini::report {

bool compare(double value, const std::string& relation, double bound) {
  if (std::isnan(value) || std::isnan(bound)) return false;
  if (relation == "<=") return value <= bound;
  if (relation == ">=") return value >= bound;
  if (relation == "<") return value < bound;
  if (relation == ">") return value > bound;
  if (relation == "==") return value == bound;
  throw ContractError("compare: unknown relation " + relation);
}

Check make_check(std::string name, std::string key, double value, std::string relation, double bound,
                 std::string provenance) {
  Check c;
  c.name = std::move(name);
  c.key = std::move(key);
  c.value = value;
  c.relation = std::move(relation);
  c.bound = bound;
  c.passed = compare(value, c.relation, bound);
  c.provenance = std::move(provenance);
  return c;
}

bool ExperimentResult::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace {

void dump(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: out += format_double(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return std::isnan(*d) ? "nan" : (*d > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ",";
    out += cell_text(table.columns[i]);
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += cell_text(row[i]);
    }
    out += "\n";
  }
  return out;
}

Json check_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["key"] = c.key;
  j["value"] = c.value;
  j["relation"] = c.relation;
  j["bound"] = c.bound;
  j["passed"] = c.passed;
  j["provenance"] = c.provenance;
  return j;
}

Json result_json(const ExperimentResult& r) {
  Json j;
  j["experiment"] = r.experiment;
  j["config"] = r.config;
  j["passed"] = r.passed();
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  j["checks"] = checks;
  j["conclusions"] = r.conclusions;
  j["data"] = r.data;
  return j;
}

Table check_table(const std::vector<ExperimentResult>& results) {
  Table t;
  t.columns = {"experiment", "check", "value", "relation", "bound", "passed", "provenance"};
  for (const auto& r : results) {
    for (const auto& c : r.checks) {
      t.rows.push_back({r.experiment, c.name, c.value, c.relation, c.bound, std::string(c.passed ? "PASS" : "FAIL"), c.provenance});
    }
  }
  return t;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << contents;
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace fubini::report
