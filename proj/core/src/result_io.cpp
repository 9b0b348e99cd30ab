#include "tcsim/result_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tcsim/errors.hpp"

namespace tcsim {

namespace {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_cell(const std::string& s, const std::string& path, int line) {
  if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw IoError("line " + std::to_string(line) + ": bad number '" + s + "'", path);
}

json scenario_json(const Scenario& s) {
  json variants = json::array();
  for (const auto& v : s.variants) {
    json o = json::object();
    for (const auto& [k, val] : v.overrides) o[k] = val ? json(*val) : json("axis");
    variants.push_back({{"name", v.name}, {"overrides", o}});
  }
  return {{"name", s.name},
          {"params", s.params},
          {"axis", {{"path", s.axis.path}, {"values", s.axis.values}}},
          {"variants", variants},
          {"observables", s.observables},
          {"initial", s.initial.describe()}};
}

Scenario scenario_from(const json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.params = j.at("params").get<ParameterMap>();
  s.axis.path = j.at("axis").at("path").get<std::string>();
  s.axis.values = j.at("axis").at("values").get<std::vector<double>>();
  for (const auto& v : j.at("variants")) {
    Variant var{v.at("name").get<std::string>(), {}};
    for (const auto& [k, val] : v.at("overrides").items()) {
      if (val.is_string() && val.get<std::string>() == "axis") {
        var.overrides[k] = std::nullopt;
      } else {
        var.overrides[k] = val.get<double>();
      }
    }
    s.variants.push_back(std::move(var));
  }
  s.observables = j.at("observables").get<std::vector<std::string>>();
  s.initial = InitialState::parse(j.at("initial").get<std::string>());
  return s;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open", path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ResultFormat parse_format(std::string_view name) {
  if (name == "csv") return ResultFormat::Csv;
  if (name == "json") return ResultFormat::Json;
  throw ConfigError("unknown output format '" + std::string(name) + "'", 0, "format");
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << csv_quote(result.scenario.axis.path);
  for (const auto& c : result.columns) out << "," << csv_quote(c);
  out << ",status\n";
  for (const auto& r : result.rows) {
    out << format_number(r.axis);
    for (double v : r.values) out << "," << format_number(v);
    out << "," << csv_quote(r.status) << "\n";
  }
}

void write_json(const SweepResult& result, std::ostream& out) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    json vals = json::array();
    for (double v : r.values) vals.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    rows.push_back({{"axis", r.axis}, {"values", vals}, {"status", r.status}});
  }
  const json doc = {{"metadata",
                     {{"code_version", result.metadata.code_version},
                      {"jobs", result.metadata.jobs},
                      {"scenario", scenario_json(result.scenario)}}},
                    {"axis", result.scenario.axis.path},
                    {"columns", result.columns},
                    {"rows", rows}};
  out << doc.dump(2) << "\n";
}

void export_result(const SweepResult& result, const std::filesystem::path& path,
                   ResultFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing", path.string());
  if (format == ResultFormat::Csv) {
    write_csv(result, out);
  } else {
    write_json(result, out);
  }
  out.flush();
  if (!out) throw IoError("write failed", path.string());
}

SweepResult read_csv(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  SweepResult result;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = csv_fields(line);
    if (!header) {
      if (fields.size() < 2 || fields.back() != "status") {
        throw IoError("line " + std::to_string(line_no) + ": header must end with 'status'",
                      path.string());
      }
      result.scenario.axis.path = fields.front();
      result.columns.assign(fields.begin() + 1, fields.end() - 1);
      header = true;
      continue;
    }
    if (fields.size() != result.columns.size() + 2) {
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(result.columns.size() + 2) + " fields",
                    path.string());
    }
    SweepRow row;
    row.axis = parse_cell(fields.front(), path.string(), line_no);
    for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
      row.values.push_back(parse_cell(fields[i], path.string(), line_no));
    }
    row.status = fields.back();
    result.scenario.axis.values.push_back(row.axis);
    result.rows.push_back(std::move(row));
  }
  if (!header) throw IoError("no header row", path.string());
  return result;
}

SweepResult read_json(const std::filesystem::path& path) {
  try {
    const json doc = json::parse(slurp(path));
    SweepResult result;
    const auto& meta = doc.at("metadata");
    result.metadata.code_version = meta.at("code_version").get<std::string>();
    result.metadata.jobs = meta.at("jobs").get<unsigned>();
    result.scenario = scenario_from(meta.at("scenario"));
    result.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& r : doc.at("rows")) {
      SweepRow row;
      row.axis = r.at("axis").get<double>();
      for (const auto& v : r.at("values")) {
        row.values.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                         : v.get<double>());
      }
      row.status = r.at("status").get<std::string>();
      result.rows.push_back(std::move(row));
    }
    return result;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed result file (") + e.what() + ")", path.string());
  }
}

SweepResult read_result(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return read_csv(path);
  if (ext == ".json") return read_json(path);
  throw IoError("unrecognised result extension '" + ext + "'", path.string());
}

std::string scenario_to_json(const Scenario& scenario) { return scenario_json(scenario).dump(2); }

Scenario scenario_from_json(std::string_view text) {
  try {
    Scenario s = scenario_from(json::parse(text));
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario JSON (") + e.what() + ")");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0, "initial");
  }
}

}  // namespace tcsim
