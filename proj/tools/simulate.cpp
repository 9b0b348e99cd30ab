#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tcsim/adiabatic.hpp"
#include "tcsim/errors.hpp"
#include "tcsim/result_io.hpp"
#include "tcsim/scenario.hpp"
#include "tcsim/sweep.hpp"

namespace {

enum Exit : int { kOk = 0, kConfig = 1, kIntegration = 2, kIo = 3 };

struct Source {
  std::string preset;
  std::string config;
  std::optional<int> cutoff;
  std::optional<double> tol;

  tcsim::Scenario load() const {
    tcsim::Scenario s;
    if (!config.empty()) {
      s = tcsim::load_config(config, preset);
    } else if (!preset.empty()) {
      s = tcsim::preset(preset);
    } else {
      throw tcsim::ConfigError("one of --preset or --config is required");
    }
    if (cutoff) s.params["space.cutoff"] = *cutoff;
    if (tol) s.params["integrator.tol"] = *tol;
    s.validate();
    return s;
  }
};

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("--preset", src.preset, "Built-in scenario (fig2, fig3, fig4, fig5)");
  cmd->add_option("--config", src.config, "Key-value scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--cutoff", src.cutoff, "Fock cutoff N")->check(CLI::Range(0, 64));
  cmd->add_option("--tol", src.tol, "Integrator relative tolerance")->check(CLI::PositiveNumber);
}

int run(const Source& src, const std::string& out, const std::string& format_name,
        unsigned jobs) {
  const auto format = tcsim::parse_format(format_name);
  const tcsim::Scenario s = src.load();
  const auto result = tcsim::run_scenario(s, jobs);
  if (out.empty() || out == "-") {
    if (format == tcsim::ResultFormat::Csv) {
      tcsim::write_csv(result, std::cout);
    } else {
      tcsim::write_json(result, std::cout);
    }
  } else {
    tcsim::export_result(result, out, format);
  }
  int failed = 0;
  for (const auto& r : result.rows) {
    if (r.status != "ok") {
      ++failed;
      std::cerr << "row " << r.axis << ": " << r.status << "\n";
    }
  }
  return failed > 0 ? kIntegration : kOk;
}

int peaks(const std::string& in, const std::string& observable) {
  const auto result = tcsim::read_result(in);
  if (std::find(result.columns.begin(), result.columns.end(), observable) ==
      result.columns.end()) {
    throw tcsim::ConfigError("no column '" + observable + "' in " + in, 0, "observable");
  }
  const auto found = tcsim::find_peaks(result, observable);
  std::printf("%s,%s\n", result.scenario.axis.path.c_str(), observable.c_str());
  for (const auto& p : found) std::printf("%.12g,%.12g\n", p.axis, p.value);
  return kOk;
}

int spectrum(const Source& src, int sector, std::size_t points, const std::string& out) {
  const tcsim::Scenario s = src.load();
  const auto config = s.base();
  const auto grid = tcsim::linspace(config.window.start, config.window.end, points);
  const auto scan = tcsim::instantaneous_spectrum(config, grid, sector);

  std::ofstream file;
  if (!out.empty() && out != "-") {
    file.open(out);
    if (!file) throw tcsim::IoError("cannot open for writing", out);
  }
  std::ostream& os = file.is_open() ? file : std::cout;
  os << "tau";
  for (const auto& c : scan.curves) os << ",E" << c.curve_id;
  os << ",near_crossing\n";
  char buf[32];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", grid[i]);
    os << buf;
    bool near = false;
    for (const auto& c : scan.curves) {
      std::snprintf(buf, sizeof buf, "%.12g", c.samples[i].energy);
      os << "," << buf;
      near = near || c.samples[i].near_crossing;
    }
    os << "," << (near ? 1 : 0) << "\n";
  }
  if (file.is_open() && !file) throw tcsim::IoError("write failed", out);
  for (double t : scan.crossings) std::fprintf(stderr, "crossing at tau = %.6f\n", t);
  return kOk;
}

int chirp(const Source& src, std::optional<int> m) {
  const tcsim::Scenario s = src.load();
  auto config = s.base();
  const auto sol = m ? tcsim::solve_chirp_amplitude(config, *m)
                     : tcsim::smallest_chirp_amplitude(config);
  const double g0 = s.param("model.g0");
  std::printf("m,delta0,delta0_over_g0,phase,residual\n%d,%.12g,%.12g,%.12g,%.3g\n", sol.m,
              sol.delta0, sol.delta0 / g0, sol.phase, sol.residual);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-atom Tavis-Cummings simulation driver"};
  app.set_version_flag("--version", std::string(TCSIM_VERSION_STRING));
  app.require_subcommand(1);

  Source run_src;
  std::string out, format = "csv";
  unsigned jobs = 0;
  auto* run_cmd = app.add_subcommand("run", "Run a sweep and export the result");
  add_source(run_cmd, run_src);
  run_cmd->add_option("--out", out, "Output path ('-' or empty for stdout)");
  run_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

  std::string in, observable = "fidelity";
  auto* peaks_cmd = app.add_subcommand("peaks", "List local maxima of one result column");
  peaks_cmd->add_option("--in", in, "CSV or JSON result")->required();
  peaks_cmd->add_option("--observable", observable, "Column name");

  Source spec_src;
  int sector = 1;
  std::size_t points = 1451;
  std::string spec_out;
  auto* spec_cmd = app.add_subcommand("spectrum", "Instantaneous eigenvalues of one sector");
  add_source(spec_cmd, spec_src);
  spec_cmd->add_option("--sector", sector, "Excitation number")->check(CLI::NonNegativeNumber);
  spec_cmd->add_option("--points", points, "Grid points across the window")
      ->check(CLI::Range(2, 1000000));
  spec_cmd->add_option("--out", spec_out, "Output path ('-' or empty for stdout)");

  Source chirp_src;
  std::optional<int> m;
  auto* chirp_cmd = app.add_subcommand("chirp", "Chirp amplitude that closes the phase to 2 m pi");
  add_source(chirp_cmd, chirp_src);
  chirp_cmd->add_option("--m", m, "Target multiple of 2 pi (default: smallest attainable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return run(run_src, out, format, jobs);
    if (*peaks_cmd) return peaks(in, observable);
    if (*spec_cmd) return spectrum(spec_src, sector, points, spec_out);
    if (*chirp_cmd) return chirp(chirp_src, m);
  } catch (const tcsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const tcsim::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const tcsim::IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << "\n";
    return kIntegration;
  } catch (const tcsim::TrackingError& e) {
    std::cerr << "integration failure: " << e.what() << "\n";
    return kIntegration;
  } catch (const tcsim::NoRootError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIntegration;
  }
  return kOk;
}
