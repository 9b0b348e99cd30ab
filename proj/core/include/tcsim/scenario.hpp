#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcsim/model.hpp"
#include "tcsim/statespace.hpp"

namespace tcsim {

/// Flat parameter set keyed by dotted path, e.g. "model.delta0_over_g0".
using ParameterMap = std::map<std::string, double>;

/// Every recognised parameter path with its default value.
const ParameterMap& parameter_defaults();
bool is_parameter(std::string_view path);

struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

/// Named set of overrides evaluated at every grid point. A value of
/// std::nullopt binds the parameter to the current axis value.
struct Variant {
  std::string name;
  std::map<std::string, std::optional<double>> overrides;
};

struct InitialState {
  enum class Kind { ProductPlus, Basis } kind = Kind::ProductPlus;
  BasisState basis{};

  [[nodiscard]] StateVector build(const HilbertSpace& space) const;
  [[nodiscard]] std::string describe() const;
  static InitialState parse(std::string_view text);
};

struct Scenario {
  std::string name = "custom";
  ParameterMap params;  // overrides on top of parameter_defaults()
  SweepAxis axis;
  std::vector<Variant> variants;  // empty: a single unnamed run per point
  std::vector<std::string> observables;
  InitialState initial;

  /// Effective value of a parameter after defaults.
  [[nodiscard]] double param(const std::string& path) const;

  /// Model configuration at one grid point for one variant (nullptr for the
  /// unnamed run).
  [[nodiscard]] ModelConfig config_at(double axis_value, const Variant* variant = nullptr) const;

  /// Configuration with no axis applied.
  [[nodiscard]] ModelConfig base() const;

  /// Output column names, in order: observables per variant.
  [[nodiscard]] std::vector<std::string> columns() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Recognised observable identifiers.
const std::vector<std::string>& known_observables();

/// Built-in scenarios: fig2, fig3, fig4, fig5. Throws ConfigError otherwise.
Scenario preset(std::string_view name);
std::vector<std::string> preset_names();

/// Parses the key-value format. Unknown keys are rejected; errors carry the
/// 1-based line number. `base_preset` is applied when the text has no
/// "preset" key; a conflicting "preset" key is an error.
Scenario parse_config(std::string_view text, std::string_view base_preset = {});
Scenario load_config(const std::filesystem::path& path, std::string_view base_preset = {});

/// Builds a ModelConfig from a full parameter set.
ModelConfig config_from_parameters(const ParameterMap& params,
                                   std::optional<double> window_start = std::nullopt,
                                   std::optional<double> window_end = std::nullopt);

/// Cavity and atomic decay rates (1/sigma) for the microwave feasibility
/// numbers: g0/2pi = 50 kHz, T_at = 30 ms, Q = 4.2e10, with sigma fixed by
/// the dimensionless coupling g0 sigma.
DecayRates feasibility_decay_rates(double g0_sigma,
                                   double mode_frequency_hz = kDefaultModeFrequencyHz);

inline constexpr double kFeasibilityCouplingHz = 50.0e3;
inline constexpr double kRydbergLifetimeS = 30.0e-3;
inline constexpr double kCavityQuality = 4.2e10;

}  // namespace tcsim
