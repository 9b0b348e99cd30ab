#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "tcsim/sweep.hpp"

namespace tcsim {

enum class ResultFormat { Csv, Json };

/// "csv" or "json"; throws ConfigError otherwise.
ResultFormat parse_format(std::string_view name);

/// Header row: axis path, the result columns, then "status"; one record per
/// grid point. Values use %.12g; NaN is written as "nan". Run metadata is
/// only carried by the JSON form.
void write_csv(const SweepResult& result, std::ostream& out);

/// Object with "metadata" (version, jobs, full scenario), "columns" and
/// "rows"; NaN becomes null.
void write_json(const SweepResult& result, std::ostream& out);

/// Throws IoError when the file cannot be written.
void export_result(const SweepResult& result, const std::filesystem::path& path,
                   ResultFormat format);

/// CSV input recovers the axis, columns and rows; the scenario carries only
/// the axis path and grid.
SweepResult read_csv(const std::filesystem::path& path);

/// JSON input restores the full scenario, so it can be re-run.
SweepResult read_json(const std::filesystem::path& path);

/// Picks the reader by extension (.csv or .json).
SweepResult read_result(const std::filesystem::path& path);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(std::string_view text);

}  // namespace tcsim
