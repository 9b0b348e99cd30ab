#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tcsim/adiabatic.hpp"
#include "tcsim/dynamics.hpp"
#include "tcsim/metrics.hpp"
#include "tcsim/scenario.hpp"
#include "tcsim/sweep.hpp"

using namespace tcsim;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Peak tolerances
constexpr double kPeakTarget = 0.44;
constexpr double kPeakWindow = 0.02;
constexpr double kPeakFidelity = 0.99;
constexpr double kRuntimeLimitS = 120.0;
// Chirp root
constexpr double kRootTarget = 0.46;
constexpr double kRootAbsTol = 0.005;
constexpr double kRootRelTol = 0.05;
// Plateau
constexpr double kPlateauSpan = 0.10;
constexpr double kPlateauMaxChange = 0.01;
// Resonant point
constexpr double kResonantG0 = 18.9286;
constexpr double kResonantMin = 0.99;
// Spatial landscape
constexpr double kC3UnitTol = 0.02;
constexpr double kC3Spike = 1.02;
constexpr int kSpikeReach = 5;
// Open system
constexpr double kFitR2 = 0.98;
constexpr double kPhotonMax = 1e-3;
constexpr double kResidualMax = 0.05;
constexpr double kFidelityLo = 0.95;
constexpr double kFidelityHi = 0.98;
// Properties
constexpr double kInvariantTol = 1e-8;
constexpr double kPropagatorTol = 1e-11;
constexpr double kSectorTol = 1e-10;
constexpr double kOracleTol = 1e-9;
constexpr double kCrossingTol = 1e-3;
constexpr double kQuadraticTol = 0.02;

std::size_t nearest_index(const std::vector<double>& x, double v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i] - v) < std::abs(x[best] - v)) best = i;
  }
  return best;
}

double simulated_optimum() {
  Scenario s = preset("fig2");
  s.axis.values.clear();
  for (int i = 0; i <= 16; ++i) s.axis.values.push_back(0.40 + 0.005 * i);
  s.observables = {"fidelity"};
  const auto peaks = find_peaks(run_scenario(s, 0), "fidelity");
  return peaks.empty() ? std::nan("") : peaks.front().axis;
}

double closed_fidelity(double delta0_over_g0) {
  const ModelConfig cfg = preset("fig2").config_at(delta0_over_g0);
  const HilbertSpace space(cfg.cutoff);
  return fidelity(evolve_state(product_plus_state(space), cfg).final(), entangled_target(space));
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run_scenario(preset("fig2"), 0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto peaks = find_peaks(result, "fidelity");
  if (peaks.empty()) return {false, "no fidelity maximum found"};
  const auto& p = peaks.front();
  const bool ok = std::abs(p.axis - kPeakTarget) <= kPeakWindow && p.value > kPeakFidelity &&
                  secs < kRuntimeLimitS;
  return {ok, fmt("first maximum at Delta0 = %.4f g0 with F = %.5f, sweep %zu points in %.1f s "
                  "(want %.2f +- %.2f, F > %.2f, < %.0f s)",
                  p.axis, p.value, result.rows.size(), secs, kPeakTarget, kPeakWindow,
                  kPeakFidelity, kRuntimeLimitS)};
}

Outcome criterion2() {
  const Scenario s = preset("fig2");
  const auto sol = smallest_chirp_amplitude(s.base());
  const double root = sol.delta0 / s.param("model.g0");
  const double sim = simulated_optimum();
  const double rel = std::abs(root - sim) / sim;
  const bool ok = std::abs(root - kRootTarget) <= kRootAbsTol && rel < kRootRelTol;
  return {ok, fmt("phase-closure root Delta0 = %.4f g0 (m = %d), simulated optimum %.4f g0, "
                  "relative gap %.2f%% (want %.2f +- %.3f, gap < %.0f%%)",
                  root, sol.m, sim, 100.0 * rel, kRootTarget, kRootAbsTol, 100.0 * kRootRelTol)};
}

Outcome criterion3() {
  const double opt = simulated_optimum();
  const double f0 = closed_fidelity(opt);
  const double lo = closed_fidelity(opt * (1.0 - kPlateauSpan));
  const double hi = closed_fidelity(opt * (1.0 + kPlateauSpan));
  const double change = std::max(std::abs(lo - f0), std::abs(hi - f0)) / f0;
  return {change < kPlateauMaxChange,
          fmt("F(opt = %.4f g0) = %.5f, F(-10%%) = %.5f, F(+10%%) = %.5f, max change %.2f%% "
              "(want < %.0f%%)",
              opt, f0, lo, hi, 100.0 * change, 100.0 * kPlateauMaxChange)};
}

Outcome criterion4() {
  Scenario s = preset("fig5");
  s.variants.clear();
  s.params["decay.gamma_c"] = 0.0;
  s.params["decay.gamma_s"] = 0.0;
  s.axis = {"model.g0", {kResonantG0}};
  s.observables = {"wootters", "fidelity"};
  const auto r = run_scenario(s, 1);
  const double c = r.rows[0].values[0];
  const double f = r.rows[0].values[1];
  return {c > kResonantMin && f > kResonantMin,
          fmt("g0 sigma = %.4f, Delta0 = 0: concurrence %.4f, fidelity %.4f (want both > %.2f)",
              kResonantG0, c, f, kResonantMin)};
}

Outcome criterion5() {
  const auto r = run_scenario(preset("fig4"), 0);
  const auto x = r.axis_values();
  const auto c3 = r.column("c3");
  bool ok = true;
  std::string detail;
  for (double z : {0.0, 0.5, 1.0}) {
    const std::size_t i = nearest_index(x, z);
    const bool unit = std::abs(c3[i] - 1.0) <= kC3UnitTol;
    double spike = 0.0;
    for (int k = -kSpikeReach; k <= kSpikeReach; ++k) {
      const long j = static_cast<long>(i) + k;
      if (k == 0 || j < 0 || j >= static_cast<long>(c3.size())) continue;
      spike = std::max(spike, c3[static_cast<std::size_t>(j)]);
    }
    ok = ok && unit && spike > kC3Spike;
    detail += fmt("C3(%.2f) = %.4f, neighbour max %.4f; ", z, c3[i], spike);
  }
  for (double z : {0.25, 0.75}) {
    const std::size_t i = nearest_index(x, z);
    const bool dip = i > 0 && i + 1 < c3.size() && c3[i] < c3[i - 1] && c3[i] < c3[i + 1];
    ok = ok && dip;
    detail += fmt("C3(%.2f) = %.4f %s; ", z, c3[i], dip ? "local min" : "not a local min");
  }
  return {ok, detail + fmt("(want |C3 - 1| <= %.2f, spike > %.2f within %d steps, dips)",
                           kC3UnitTol, kC3Spike, kSpikeReach)};
}

Outcome criterion6() {
  const auto r = run_scenario(preset("fig5"), 0);
  const auto x = r.axis_values();
  const auto cav = r.column("wootters_cavity");
  const auto atom = r.column("wootters_atomic");
  auto monotone = [](const std::vector<double>& c) {
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (!(c[i] < c[i - 1])) return false;
    }
    return true;
  };
  const auto fit_c = fit_exponential(x, cav);
  const auto fit_a = fit_exponential(x, atom);
  bool below = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && !(atom[i] < cav[i])) below = false;
  }
  const bool ok = monotone(cav) && monotone(atom) && fit_c.r_squared > kFitR2 &&
                  fit_a.r_squared > kFitR2 && below;
  return {ok, fmt("cavity curve %s, R^2 = %.4f (k = %.2f); atomic curve %s, R^2 = %.4f (k = %.2f); "
                  "atomic below cavity at every nonzero rate: %s (want R^2 > %.2f)",
                  monotone(cav) ? "decreasing" : "NOT decreasing", fit_c.r_squared, fit_c.rate,
                  monotone(atom) ? "decreasing" : "NOT decreasing", fit_a.r_squared, fit_a.rate,
                  below ? "yes" : "no", kFitR2)};
}

struct DecayPoint {
  double opt;
  double fidelity;
  double photons;
  double residual;
};

DecayPoint decay_point() {
  const double opt = simulated_optimum();
  Scenario s = preset("fig3");
  s.axis.values = {opt / s.param("model.delta0_over_g0")};
  s.variants.erase(s.variants.begin());
  s.observables = {"fidelity", "mean_photon", "factorization_residual"};
  const auto r = run_scenario(s, 1);
  return {opt, r.rows[0].values[0], r.rows[0].values[1], r.rows[0].values[2]};
}

Outcome criterion7() {
  const auto p = decay_point();
  return {p.photons < kPhotonMax && p.residual < kResidualMax,
          fmt("with decay at Delta0 = %.4f g0: <n> = %.3e, factorization residual = %.4f "
              "(want < %.0e, < %.2f)",
              p.opt, p.photons, p.residual, kPhotonMax, kResidualMax)};
}

Outcome criterion8() {
  const auto p = decay_point();
  const auto r = feasibility_decay_rates(30.0);
  return {p.fidelity >= kFidelityLo && p.fidelity <= kFidelityHi,
          fmt("gamma sigma = %.4e, Gamma sigma = %.4e, Delta0 = %.4f g0: F = %.4f (want [%.2f, %.2f])",
              r.gamma_c, r.gamma_s, p.opt, p.fidelity, kFidelityLo, kFidelityHi)};
}

Outcome criterion9() {
  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) failed.push_back(name);
  };
  std::mt19937 rng(20240601);
  std::normal_distribution<double> nd;
  auto random_state = [&](const HilbertSpace& space, int sector) {
    ComplexVector v = ComplexVector::Zero(space.dim());
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      if (sector < 0 || space.state(i).excitations() == sector) v(i) = {nd(rng), nd(rng)};
    }
    StateVector psi(space, v);
    psi.normalize();
    return psi;
  };

  ModelConfig cfg = symmetric_config(30.0, 1.25, 13.2, 2.0, 0.2);
  const HilbertSpace space(cfg.cutoff);
  const OperatorSet ops = build_operators(space);

  double norm_dev = 0.0, leak = 0.0, comm = 0.0;
  for (int t = 0; t < 4; ++t) {
    norm_dev = std::max(norm_dev, std::abs(evolve_state(random_state(space, -1), cfg).final().norm() - 1.0));
    const int sector = 1 + t % 3;
    const auto out = evolve_state(random_state(space, sector), cfg).final();
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      if (space.state(i).excitations() != sector) leak = std::max(leak, std::abs(out.amplitudes()(i)));
    }
  }
  for (double tau : {-3.1, -2.0, -0.4, 0.0, 1.3, 2.0}) {
    const ComplexMatrix h = hamiltonian(tau, cfg, ops).matrix;
    comm = std::max(comm, (h * ops.n_exc - ops.n_exc * h).norm());
  }
  ModelConfig tight = cfg;
  tight.tol = kPropagatorTol;
  const auto u = extract_propagator(tight, 2);
  const double unitarity = (u.matrix.adjoint() * u.matrix -
                            ComplexMatrix::Identity(u.matrix.rows(), u.matrix.cols())).norm();
  check(norm_dev < kInvariantTol && unitarity < kInvariantTol, "unitarity");
  check(leak < kSectorTol && comm < kSectorTol, "sector conservation");

  ModelConfig open = cfg;
  open.gamma_c = 0.01;
  open.gamma_s = 0.02;
  const DensityMatrix rho = evolve_density(DensityMatrix(random_state(space, -1)), open).final();
  const double trace_dev = std::abs(rho.trace() - 1.0);
  const double herm = (rho.entries() - rho.entries().adjoint()).cwiseAbs().maxCoeff();
  const double min_eig = rho.min_eigenvalue();
  check(trace_dev < kInvariantTol && herm < kInvariantTol && min_eig > -kInvariantTol,
        "trace/positivity");

  Eigen::Vector4cd bell;
  bell << 0.0, 1.0, 1.0, 0.0;
  bell.normalize();
  Eigen::Vector4cd prod;
  prod << 0.5, 0.5, 0.5, 0.5;
  const ComplexMatrix werner =
      0.5 * bell * bell.adjoint() + 0.125 * ComplexMatrix::Identity(4, 4);
  const double cb = wootters_concurrence(TwoQubitDensity::from_pure(bell));
  const double cp = wootters_concurrence(TwoQubitDensity::from_pure(prod));
  const double cw = wootters_concurrence(TwoQubitDensity(werner));
  check(std::abs(cb - 1.0) < kOracleTol && std::abs(cp) < kOracleTol &&
            std::abs(cw - 0.25) < kOracleTol,
        "Wootters oracles");

  const HilbertSpace small(2);
  auto make = [&](std::initializer_list<BasisState> terms) {
    ComplexVector v = ComplexVector::Zero(small.dim());
    for (const auto& b : terms) v(small.index(b)) = 1.0;
    StateVector psi(small, v);
    psi.normalize();
    return psi;
  };
  using L = Level;
  const double c3_prod = concurrence_c3(make({{0, L::Ground, L::Ground}}));
  const double c3_bell = concurrence_c3(make({{0, L::Ground, L::Excited}, {0, L::Excited, L::Ground}}));
  const double c3_ghz = concurrence_c3(make({{0, L::Ground, L::Ground}, {1, L::Excited, L::Excited}}));
  check(std::abs(c3_prod) < 1e-6 && std::abs(c3_bell - 1.0) < kOracleTol &&
            std::abs(c3_ghz - std::sqrt(1.5)) < kOracleTol,
        "C3 oracles");

  ModelConfig skew = symmetric_config(30.0, 1.25, 0.0, 2.0, 0.2);
  skew.pulses.g2 = 20.0;
  const double tc = crossing_time(skew.pulses.g1, skew.pulses.g2, skew.pulses.delta);
  const auto gap = minimum_gap(skew, 2, 1, -1.0, 1.0);
  const double crossing_err = std::abs(gap.tau - tc);
  check(crossing_err < kCrossingTol, "crossing time");

  double quad = 0.0;
  for (double d0 : {0.5, 1.5, 3.0}) {
    const ModelConfig c = symmetric_config(30.0, 1.25, d0, 2.0, 0.2);
    const double t0 = c.chirps.tau0;
    const int n = 20000;
    const double a = -t0 - 1.5, b = -t0 + 1.5, h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = a + i * h;
      const double d = detuning(t, 1, c.chirps);
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * d * d / (2.0 * 2.0 * coupling(t, 1, c.pulses));
    }
    const double law = 2.0 * s * h / 3.0;
    quad = std::max(quad, std::abs(chirp_phase_shift(c, -1) / law - 1.0));
  }
  check(quad < kQuadraticTol, "quadratic small-chirp law");

  std::string detail = fmt(
      "norm dev %.1e, U^dag U dev %.1e, sector leak %.1e, [H,N] %.1e, trace dev %.1e, "
      "min eig %.1e, C(Bell/product/Werner) = %.6f/%.6f/%.6f, C3 = %.6f/%.6f/%.6f, "
      "crossing err %.1e, small-chirp residual %.2e",
      norm_dev, unitarity, leak, comm, trace_dev, min_eig, cb, cp, cw, c3_prod, c3_bell, c3_ghz,
      crossing_err, quad);
  for (const auto& f : failed) detail += "; FAILED " + f;
  return {failed.empty(), detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "first fidelity maximum", criterion1},
      {2, "phase-closure chirp amplitude", criterion2},
      {3, "robustness plateau", criterion3},
      {4, "resonant maximal entanglement", criterion4},
      {5, "spatial concurrence landscape", criterion5},
      {6, "open-system decay trends", criterion6},
      {7, "asymptotic factorization", criterion7},
      {8, "decoherence-limited fidelity", criterion8},
      {9, "property suites", criterion9},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  int ran = 0;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
