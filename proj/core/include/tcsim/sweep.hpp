#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tcsim/scenario.hpp"

namespace tcsim {

struct SweepRow {
  double axis = 0.0;
  std::vector<double> values;  // one per column, NaN where unavailable
  std::string status = "ok";
};

struct RunMetadata {
  std::string code_version;
  unsigned jobs = 1;
};

struct SweepResult {
  Scenario scenario;
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;  // axis order
  RunMetadata metadata;

  /// Index of a column; throws std::out_of_range.
  [[nodiscard]] std::size_t column_index(const std::string& name) const;
  [[nodiscard]] std::vector<double> column(const std::string& name) const;
  [[nodiscard]] std::vector<double> axis_values() const;
};

/// Observables of one final state. Columns follow `observables`.
std::vector<double> evaluate_observables(const StateVector& psi, const ModelConfig& config,
                                         const std::vector<std::string>& observables);
std::vector<double> evaluate_observables(const DensityMatrix& rho, const ModelConfig& config,
                                         const std::vector<std::string>& observables);

/// Runs every grid point (and variant). Failures are recorded in the row
/// status and leave NaN values. jobs = 0 uses the hardware concurrency.
SweepResult run_scenario(const Scenario& scenario, unsigned jobs = 1);

struct Peak {
  std::size_t index;  // grid index of the sampled maximum
  double axis;        // parabolic vertex
  double value;
};

/// Interior local maxima by the three-point test. On a plateau the smaller
/// axis value wins. Throws std::invalid_argument for fewer than 3 points or
/// mismatched lengths.
std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y);
std::vector<Peak> find_peaks(const SweepResult& result, const std::string& column);

struct ExponentialFit {
  double amplitude;
  double rate;
  double r_squared;
};

/// Least-squares fit of y = A exp(-k x) with k >= 0.
ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y);

}  // namespace tcsim
