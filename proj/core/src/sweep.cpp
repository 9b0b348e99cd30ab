#include "tcsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <type_traits>

#include <boost/math/tools/minima.hpp>

#include "tcsim/adiabatic.hpp"
#include "tcsim/dynamics.hpp"
#include "tcsim/errors.hpp"
#include "tcsim/metrics.hpp"

namespace tcsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double predicted_from_phases(const ModelConfig& config) {
  return predicted_fidelity(adiabatic_phases(config, -1).phi_tilde);
}

template <class State>
std::vector<double> evaluate(const State& state, const ModelConfig& config,
                             const std::vector<std::string>& observables) {
  const StateVector target = entangled_target(state.space());
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto& o : observables) {
    if (o == "fidelity") {
      out.push_back(fidelity(state, target));
    } else if (o == "predicted_fidelity") {
      try {
        out.push_back(predicted_from_phases(config));
      } catch (const std::exception&) {
        out.push_back(kNaN);
      }
    } else if (o == "c3") {
      if constexpr (std::is_same_v<State, StateVector>) {
        out.push_back(concurrence_c3(state));
      } else {
        out.push_back(kNaN);
      }
    } else if (o == "wootters") {
      out.push_back(atomic_concurrence(state));
    } else if (o == "mean_photon") {
      out.push_back(mean_photon(state));
    } else if (o == "factorization_residual") {
      out.push_back(factorization_residual(state));
    } else {
      throw std::invalid_argument("unknown observable '" + o + "'");
    }
  }
  return out;
}

std::vector<double> run_point(const Scenario& s, const ModelConfig& config, std::string& status) {
  try {
    const HilbertSpace space(config.cutoff);
    const StateVector psi0 = s.initial.build(space);
    if (config.closed()) {
      return evaluate_observables(evolve_state(psi0, config).final(), config, s.observables);
    }
    return evaluate_observables(evolve_density(DensityMatrix(psi0), config).final(), config,
                                s.observables);
  } catch (const IntegrationError& e) {
    status = std::string("integration_error: ") + e.what();
  } catch (const std::exception& e) {
    status = std::string("error: ") + e.what();
  }
  return std::vector<double>(s.observables.size(), kNaN);
}

SweepRow run_row(const Scenario& s, double x) {
  SweepRow row;
  row.axis = x;
  if (s.variants.empty()) {
    row.values = run_point(s, s.config_at(x), row.status);
    return row;
  }
  std::vector<std::string> failures;
  for (const auto& v : s.variants) {
    std::string status = "ok";
    const auto vals = run_point(s, s.config_at(x, &v), status);
    row.values.insert(row.values.end(), vals.begin(), vals.end());
    if (status != "ok") failures.push_back(v.name + ": " + status);
  }
  if (!failures.empty()) {
    row.status.clear();
    for (std::size_t i = 0; i < failures.size(); ++i) {
      row.status += (i ? "; " : "") + failures[i];
    }
  }
  return row;
}

double sse_for_rate(std::span<const double> x, std::span<const double> y, double k,
                    double* amplitude) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = std::exp(-k * x[i]);
    num += y[i] * e;
    den += e * e;
  }
  const double a = den > 0.0 ? num / den : 0.0;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - a * std::exp(-k * x[i]);
    sse += r * r;
  }
  if (amplitude != nullptr) *amplitude = a;
  return sse;
}

}  // namespace

std::size_t SweepResult::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column named '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> SweepResult::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.values.at(c));
  return out;
}

std::vector<double> SweepResult::axis_values() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.axis);
  return out;
}

std::vector<double> evaluate_observables(const StateVector& psi, const ModelConfig& config,
                                         const std::vector<std::string>& observables) {
  return evaluate(psi, config, observables);
}

std::vector<double> evaluate_observables(const DensityMatrix& rho, const ModelConfig& config,
                                         const std::vector<std::string>& observables) {
  return evaluate(rho, config, observables);
}

SweepResult run_scenario(const Scenario& scenario, unsigned jobs) {
  scenario.validate();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto& grid = scenario.axis.values;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));

  SweepResult result;
  result.scenario = scenario;
  result.columns = scenario.columns();
  result.metadata = {TCSIM_VERSION_STRING, jobs};
  result.rows.resize(grid.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      result.rows[i] = run_row(scenario, grid[i]);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return result;
}

std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("find_peaks: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("find_peaks: need at least 3 points");
  std::vector<Peak> peaks;
  const std::size_t n = y.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(y[i] > y[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 < n && y[j + 1] < y[i]) {
      double vertex = x[i];
      double value = y[i];
      if (j == i) {
        const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
        const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double c = (d12 - d01) / (x2 - x0);
        if (c < 0.0) {
          const double b = d01 - c * (x0 + x1);
          vertex = -b / (2.0 * c);
          value = y1 + (vertex - x1) * (d01 + c * (vertex - x0));
        }
      }
      peaks.push_back({i, vertex, value});
    }
    i = j + 1;
  }
  return peaks;
}

std::vector<Peak> find_peaks(const SweepResult& result, const std::string& column) {
  const auto y = result.column(column);
  const auto x = result.axis_values();
  return find_peaks(x, y);
}

ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_exponential: need at least 2 matched points");
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const double span = *xmax - *xmin;
  if (!(span > 0.0)) throw std::invalid_argument("fit_exponential: degenerate abscissa");

  // Coarse log scan for the bracket, then Brent on the bracketing interval.
  const double k_lo = 1e-6 / span, k_hi = 1e4 / span;
  constexpr int kScan = 400;
  double best_k = 0.0;
  double best = sse_for_rate(x, y, 0.0, nullptr);
  std::size_t best_i = 0;
  std::vector<double> ks(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    ks[static_cast<std::size_t>(i)] = k_lo * std::pow(k_hi / k_lo, static_cast<double>(i) / kScan);
    const double s = sse_for_rate(x, y, ks[static_cast<std::size_t>(i)], nullptr);
    if (s < best) {
      best = s;
      best_k = ks[static_cast<std::size_t>(i)];
      best_i = static_cast<std::size_t>(i);
    }
  }
  if (best_k > 0.0) {
    const double a = best_i > 0 ? ks[best_i - 1] : 0.0;
    const double b = ks[std::min<std::size_t>(best_i + 1, kScan)];
    const auto r = boost::math::tools::brent_find_minima(
        [&](double k) { return sse_for_rate(x, y, k, nullptr); }, a, b, 50);
    if (r.second <= best) best_k = r.first;
  }
  double amplitude = 0.0;
  const double sse = sse_for_rate(x, y, best_k, &amplitude);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double sst = 0.0;
  for (double v : y) sst += (v - mean) * (v - mean);
  const double r2 = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : 0.0);
  return {amplitude, best_k, r2};
}

}  // namespace tcsim
