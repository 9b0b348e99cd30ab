#include "tcsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "tcsim/errors.hpp"
#include "tcsim/metrics.hpp"

namespace tcsim {

namespace {

constexpr const char* kWindowStart = "window.start";
constexpr const char* kWindowEnd = "window.end";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

double number_or_throw(std::string_view s, int line, const std::string& key) {
  const auto v = parse_number(s);
  if (!v) throw ConfigError("'" + key + "' expects a finite number, got '" + trim(s) + "'", line, key);
  return *v;
}

std::vector<double> arange(double start, double stop, double step) {
  std::vector<double> v;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= count; ++i) v.push_back(start + step * static_cast<double>(i));
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t points) {
  std::vector<double> v(points);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

Scenario fig_base(std::string name, double g0, double delta0_over_g0) {
  Scenario s;
  s.name = std::move(name);
  s.params = {{"model.g0", g0},          {"model.delta", 1.25},   {"model.tau0", 2.0},
              {"model.sigma_s", 0.2},    {"model.delta0_over_g0", delta0_over_g0},
              {"space.cutoff", 3.0}};
  s.initial = InitialState{};
  return s;
}

}  // namespace

const ParameterMap& parameter_defaults() {
  static const ParameterMap defaults = {
      {"model.g0", 30.0},
      {"model.delta", 1.25},
      {"model.delta0_over_g0", 0.0},
      {"model.delta0_scale", 1.0},
      {"model.tau0", 2.0},
      {"model.sigma_s", 0.2},
      {"spatial.z1", 0.0},
      {"spatial.z2", 0.0},
      {"spatial.y1", 0.0},
      {"spatial.y2", 0.0},
      {"spatial.wavelength", 1.0},
      {"spatial.w0", 1.0},
      {"decay.gamma_c", 0.0},
      {"decay.gamma_s", 0.0},
      {"space.cutoff", 3.0},
      {"integrator.tol", 1e-10},
  };
  return defaults;
}

bool is_parameter(std::string_view path) {
  return parameter_defaults().contains(std::string(path)) || path == kWindowStart ||
         path == kWindowEnd;
}

const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> names = {
      "fidelity", "predicted_fidelity", "c3", "wootters", "mean_photon", "factorization_residual",
  };
  return names;
}

StateVector InitialState::build(const HilbertSpace& space) const {
  if (kind == Kind::ProductPlus) return product_plus_state(space);
  return StateVector::basis(space, basis);
}

std::string InitialState::describe() const {
  if (kind == Kind::ProductPlus) return "product_plus";
  return "basis:" + std::to_string(basis.n) + "," + (basis.s1 == Level::Excited ? "e" : "g") + "," +
         (basis.s2 == Level::Excited ? "e" : "g");
}

InitialState InitialState::parse(std::string_view text) {
  const std::string t = trim(text);
  if (t == "product_plus") return {};
  if (t.rfind("basis:", 0) == 0) {
    const auto parts = split_list(std::string_view(t).substr(6));
    if (parts.size() == 3) {
      const auto n = parse_number(parts[0]);
      auto level = [](const std::string& p) -> std::optional<Level> {
        if (p == "g") return Level::Ground;
        if (p == "e") return Level::Excited;
        return std::nullopt;
      };
      const auto s1 = level(parts[1]);
      const auto s2 = level(parts[2]);
      if (n && *n >= 0 && std::floor(*n) == *n && s1 && s2) {
        InitialState s;
        s.kind = Kind::Basis;
        s.basis = {static_cast<int>(*n), *s1, *s2};
        return s;
      }
    }
  }
  throw std::invalid_argument("initial state must be 'product_plus' or 'basis:n,s1,s2' with s in {g,e}");
}

double Scenario::param(const std::string& path) const {
  if (auto it = params.find(path); it != params.end()) return it->second;
  if (auto it = parameter_defaults().find(path); it != parameter_defaults().end()) return it->second;
  throw ConfigError("unknown parameter '" + path + "'", 0, path);
}

ModelConfig config_from_parameters(const ParameterMap& p, std::optional<double> window_start,
                                   std::optional<double> window_end) {
  auto get = [&](const char* key) {
    if (auto it = p.find(key); it != p.end()) return it->second;
    return parameter_defaults().at(key);
  };
  const double cutoff = get("space.cutoff");
  if (cutoff < 0 || std::floor(cutoff) != cutoff || cutoff > 64) {
    throw ConfigError("space.cutoff must be an integer in [0, 64]", 0, "space.cutoff");
  }
  SpatialConfig spatial;
  spatial.g0 = get("model.g0");
  spatial.z1 = get("spatial.z1");
  spatial.z2 = get("spatial.z2");
  spatial.y1 = get("spatial.y1");
  spatial.y2 = get("spatial.y2");
  spatial.wavelength = get("spatial.wavelength");
  spatial.w0 = get("spatial.w0");
  if (!(spatial.wavelength > 0.0)) throw ConfigError("must be > 0", 0, "spatial.wavelength");
  if (!(spatial.w0 > 0.0)) throw ConfigError("must be > 0", 0, "spatial.w0");
  const auto [g1, g2] = spatial_amplitudes(spatial);

  ModelConfig cfg;
  cfg.pulses = {g1, g2, get("model.delta")};
  cfg.chirps = {get("model.delta0_over_g0") * get("model.delta0_scale") * spatial.g0,
                get("model.tau0"), get("model.sigma_s")};
  cfg.cutoff = static_cast<int>(cutoff);
  cfg.gamma_c = get("decay.gamma_c");
  cfg.gamma_s = get("decay.gamma_s");
  cfg.tol = get("integrator.tol");
  cfg.window = default_window(cfg.pulses, cfg.chirps);
  if (auto it = p.find(kWindowStart); it != p.end()) cfg.window.start = it->second;
  if (auto it = p.find(kWindowEnd); it != p.end()) cfg.window.end = it->second;
  if (window_start) cfg.window.start = *window_start;
  if (window_end) cfg.window.end = *window_end;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    if (cfg.window.start >= cfg.window.end) throw ConfigError(e.what(), 0, "window");
    throw ConfigError(e.what(), 0, std::string(e.what()).substr(0, std::string(e.what()).find(':')));
  }
  return cfg;
}

ModelConfig Scenario::config_at(double axis_value, const Variant* variant) const {
  ParameterMap p = params;
  if (is_parameter(axis.path)) p[axis.path] = axis_value;
  if (variant != nullptr) {
    for (const auto& [key, value] : variant->overrides) p[key] = value ? *value : axis_value;
  }
  return config_from_parameters(p);
}

ModelConfig Scenario::base() const { return config_from_parameters(params); }

std::vector<std::string> Scenario::columns() const {
  std::vector<std::string> cols;
  if (variants.empty()) return observables;
  for (const auto& v : variants) {
    for (const auto& o : observables) cols.push_back(o + "_" + v.name);
  }
  return cols;
}

void Scenario::validate() const {
  for (const auto& [key, value] : params) {
    if (!is_parameter(key)) throw ConfigError("unknown parameter '" + key + "'", 0, key);
    if (!std::isfinite(value)) throw ConfigError("parameter must be finite", 0, key);
  }
  if (axis.path.empty()) throw ConfigError("sweep axis is not set", 0, "sweep.axis");
  if (axis.values.empty()) throw ConfigError("sweep grid is empty", 0, "sweep.values");
  if (axis.values.size() > 1) {
    const bool up = axis.values[1] > axis.values[0];
    for (std::size_t i = 1; i < axis.values.size(); ++i) {
      const bool ok = up ? axis.values[i] > axis.values[i - 1] : axis.values[i] < axis.values[i - 1];
      if (!ok) throw ConfigError("sweep grid must be strictly monotone", 0, "sweep.values");
    }
  }
  if (observables.empty()) throw ConfigError("no observables requested", 0, "observables");
  for (const auto& o : observables) {
    if (std::find(known_observables().begin(), known_observables().end(), o) ==
        known_observables().end()) {
      throw ConfigError("unknown observable '" + o + "'", 0, "observables");
    }
  }
  std::set<std::string> names;
  for (const auto& v : variants) {
    if (v.name.empty() || !names.insert(v.name).second) {
      throw ConfigError("variant names must be unique and nonempty", 0, "variant." + v.name);
    }
    for (const auto& [key, value] : v.overrides) {
      if (!is_parameter(key)) {
        throw ConfigError("unknown parameter '" + key + "'", 0, "variant." + v.name + "." + key);
      }
    }
  }
  if (!is_parameter(axis.path)) {
    const bool all_bound = !variants.empty() &&
                           std::all_of(variants.begin(), variants.end(), [](const Variant& v) {
                             return std::any_of(v.overrides.begin(), v.overrides.end(),
                                                [](const auto& kv) { return !kv.second; });
                           });
    if (!all_bound) {
      throw ConfigError("axis '" + axis.path + "' is not a parameter and not bound by every variant",
                        0, "sweep.axis");
    }
  }
  for (double x : axis.values) {
    if (variants.empty()) {
      (void)config_at(x);
    } else {
      for (const auto& v : variants) (void)config_at(x, &v);
    }
  }
}

DecayRates feasibility_decay_rates(double g0_sigma, double mode_frequency_hz) {
  const double sigma = g0_sigma / (2.0 * std::numbers::pi * kFeasibilityCouplingHz);
  return decay_rates_from_physical(sigma, kRydbergLifetimeS, kCavityQuality, mode_frequency_hz);
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5"}; }

Scenario preset(std::string_view name) {
  if (name == "fig2") {
    Scenario s = fig_base("fig2", 30.0, 0.44);
    s.axis = {"model.delta0_over_g0", arange(0.0, 1.2, 0.005)};
    s.observables = {"fidelity", "predicted_fidelity", "c3", "wootters", "mean_photon"};
    return s;
  }
  if (name == "fig3") {
    Scenario s = fig_base("fig3", 30.0, 0.44);
    s.axis = {"model.delta0_scale", arange(0.8, 1.2, 0.005)};
    const DecayRates r = feasibility_decay_rates(30.0);
    s.variants = {
        {"nodecay", {{"decay.gamma_c", 0.0}, {"decay.gamma_s", 0.0}}},
        {"decay", {{"decay.gamma_c", r.gamma_c}, {"decay.gamma_s", r.gamma_s}}},
    };
    s.observables = {"fidelity", "wootters", "mean_photon", "factorization_residual"};
    return s;
  }
  if (name == "fig4") {
    Scenario s = fig_base("fig4", 30.0, 0.44);
    s.axis = {"spatial.z2", arange(0.0, 1.0, 0.005)};
    s.observables = {"c3", "fidelity", "wootters", "mean_photon"};
    return s;
  }
  if (name == "fig5") {
    Scenario s = fig_base("fig5", 18.9286, 0.0);
    std::vector<double> grid{0.0};
    for (double r : logspace(1e-4, 1e-1, 13)) grid.push_back(r);
    s.axis = {"decay.rate", grid};
    s.variants = {
        {"cavity", {{"decay.gamma_c", std::nullopt}, {"decay.gamma_s", 0.0}}},
        {"atomic", {{"decay.gamma_s", std::nullopt}, {"decay.gamma_c", 0.0}}},
    };
    s.observables = {"wootters", "fidelity", "mean_photon", "factorization_residual"};
    return s;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'", 0, "preset");
}

Scenario parse_config(std::string_view text, std::string_view base_preset) {
  struct Entry {
    int line;
    std::string key;
    std::string value;
  };
  std::vector<Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
    }
    Entry e{line_no, trim(std::string_view(line).substr(0, eq)),
            trim(std::string_view(line).substr(eq + 1))};
    if (e.key.empty()) throw ConfigError("missing key before '='", line_no);
    if (e.value.empty()) throw ConfigError("missing value for '" + e.key + "'", line_no, e.key);
    if (!seen.insert(e.key).second) throw ConfigError("duplicate key '" + e.key + "'", line_no, e.key);
    entries.push_back(std::move(e));
  }

  Scenario s;
  if (!base_preset.empty()) s = preset(base_preset);
  for (const auto& e : entries) {
    if (e.key == "preset") {
      if (!base_preset.empty() && e.value != base_preset) {
        throw ConfigError("preset '" + e.value + "' conflicts with requested preset '" +
                              std::string(base_preset) + "'",
                          e.line, "preset");
      }
      try {
        s = preset(e.value);
      } catch (const ConfigError& err) {
        throw ConfigError(err.what(), e.line, "preset");
      }
    }
  }

  bool sweep_given = false;
  bool variants_given = false;
  std::optional<double> start, stop, step, points;
  std::string spacing = "linear";
  bool include_zero = false;
  std::optional<std::vector<double>> values;
  std::optional<std::string> axis_path;
  std::vector<Variant> variants;

  for (const auto& e : entries) {
    const std::string& k = e.key;
    if (k == "preset") continue;
    if (k == "name") {
      s.name = e.value;
    } else if (k == "observables") {
      s.observables = split_list(e.value);
    } else if (k == "state.initial") {
      try {
        s.initial = InitialState::parse(e.value);
      } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what(), e.line, k);
      }
    } else if (k.rfind("sweep.", 0) == 0) {
      sweep_given = true;
      if (k == "sweep.axis") axis_path = e.value;
      else if (k == "sweep.start") start = number_or_throw(e.value, e.line, k);
      else if (k == "sweep.stop") stop = number_or_throw(e.value, e.line, k);
      else if (k == "sweep.step") step = number_or_throw(e.value, e.line, k);
      else if (k == "sweep.points") points = number_or_throw(e.value, e.line, k);
      else if (k == "sweep.spacing") {
        if (e.value != "linear" && e.value != "log") {
          throw ConfigError("sweep.spacing must be 'linear' or 'log'", e.line, k);
        }
        spacing = e.value;
      } else if (k == "sweep.include_zero") {
        if (e.value != "true" && e.value != "false") {
          throw ConfigError("sweep.include_zero must be 'true' or 'false'", e.line, k);
        }
        include_zero = e.value == "true";
      } else if (k == "sweep.values") {
        std::vector<double> v;
        for (const auto& piece : split_list(e.value)) v.push_back(number_or_throw(piece, e.line, k));
        values = std::move(v);
      } else {
        throw ConfigError("unknown key '" + k + "'", e.line, k);
      }
    } else if (k.rfind("variant.", 0) == 0) {
      variants_given = true;
      const std::string rest = k.substr(8);
      const auto dot = rest.find('.');
      if (dot == std::string::npos || dot == 0) {
        throw ConfigError("variant keys look like 'variant.<name>.<parameter>'", e.line, k);
      }
      const std::string vname = rest.substr(0, dot);
      const std::string param = rest.substr(dot + 1);
      if (!is_parameter(param)) throw ConfigError("unknown parameter '" + param + "'", e.line, k);
      auto it = std::find_if(variants.begin(), variants.end(),
                             [&](const Variant& v) { return v.name == vname; });
      if (it == variants.end()) {
        variants.push_back({vname, {}});
        it = std::prev(variants.end());
      }
      if (e.value == "axis") it->overrides[param] = std::nullopt;
      else it->overrides[param] = number_or_throw(e.value, e.line, k);
    } else if (is_parameter(k)) {
      s.params[k] = number_or_throw(e.value, e.line, k);
    } else {
      throw ConfigError("unknown key '" + k + "'", e.line, k);
    }
  }

  if (variants_given) s.variants = std::move(variants);
  if (sweep_given) {
    if (axis_path) s.axis.path = *axis_path;
    if (values) {
      if (start || stop || step || points) {
        throw ConfigError("sweep.values excludes sweep.start/stop/step/points", 0, "sweep.values");
      }
      s.axis.values = *values;
    } else if (start || stop || step || points) {
      if (!start || !stop) throw ConfigError("sweep needs both start and stop", 0, "sweep.start");
      if (spacing == "log") {
        if (!points || *points < 2) throw ConfigError("log sweep needs sweep.points >= 2", 0, "sweep.points");
        if (!(*start > 0.0) || !(*stop > 0.0)) {
          throw ConfigError("log sweep needs positive start and stop", 0, "sweep.start");
        }
        s.axis.values = logspace(*start, *stop, static_cast<std::size_t>(*points));
      } else if (step) {
        if (!(*step > 0.0)) throw ConfigError("sweep.step must be > 0", 0, "sweep.step");
        s.axis.values = arange(*start, *stop, *step);
      } else if (points) {
        if (*points < 2) throw ConfigError("sweep.points must be >= 2", 0, "sweep.points");
        const auto n = static_cast<std::size_t>(*points);
        s.axis.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          s.axis.values[i] = *start + (*stop - *start) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
      } else {
        throw ConfigError("sweep needs sweep.step or sweep.points", 0, "sweep.step");
      }
    }
    if (include_zero) s.axis.values.insert(s.axis.values.begin(), 0.0);
  }

  s.validate();
  return s;
}

Scenario load_config(const std::filesystem::path& path, std::string_view base_preset) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base_preset);
}

}  // namespace tcsim
