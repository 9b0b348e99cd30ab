#include "tcsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tcsim {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}

}  // namespace

void ModelConfig::validate() const {
  require(std::isfinite(pulses.g1) && pulses.g1 >= 0.0, "pulses.g1", "must be finite and >= 0");
  require(std::isfinite(pulses.g2), "pulses.g2", "must be finite");
  require(std::isfinite(pulses.delta) && pulses.delta >= 0.0, "pulses.delta", "must be >= 0");
  require(std::isfinite(chirps.delta0), "chirps.delta0", "must be finite");
  require(chirps.sigma_s > 0.0, "chirps.sigma_s", "must be > 0");
  require(chirps.tau0 >= 0.0, "chirps.tau0", "must be >= 0");
  require(cutoff >= 0, "cutoff", "must be >= 0");
  require(gamma_c >= 0.0, "gamma_c", "must be >= 0");
  require(gamma_s >= 0.0, "gamma_s", "must be >= 0");
  require(window.start < window.end, "window", "start must be < end");
  require(tol > 0.0 && tol < 1.0, "tol", "must be in (0, 1)");
}

Window default_window(const PulseParams& p, const ChirpParams& c) {
  const double half = std::max(p.delta + 6.0, c.tau0 + 6.0 * c.sigma_s);
  return {-half, half};
}

ModelConfig symmetric_config(double g0, double delta, double delta0, double tau0,
                             double sigma_s) {
  ModelConfig cfg;
  cfg.pulses = {g0, g0, delta};
  cfg.chirps = {delta0, tau0, sigma_s};
  cfg.window = default_window(cfg.pulses, cfg.chirps);
  return cfg;
}

double coupling(double tau, int j, const PulseParams& p) {
  switch (j) {
    case 1:
      return p.g1 * std::exp(-(tau + p.delta) * (tau + p.delta));
    case 2:
      return p.g2 * std::exp(-(tau - p.delta) * (tau - p.delta));
    default:
      throw std::invalid_argument("coupling: atom index must be 1 or 2");
  }
}

double detuning(double tau, int j, const ChirpParams& c) {
  const double s2 = c.sigma_s * c.sigma_s;
  switch (j) {
    case 1:
      return c.delta0 * std::exp(-(tau + c.tau0) * (tau + c.tau0) / s2);
    case 2:
      return -c.delta0 * std::exp(-(tau - c.tau0) * (tau - c.tau0) / s2);
    default:
      throw std::invalid_argument("detuning: atom index must be 1 or 2");
  }
}

std::pair<double, double> spatial_amplitudes(const SpatialConfig& s) {
  if (!(s.wavelength > 0.0) || !(s.w0 > 0.0)) {
    throw std::invalid_argument("spatial_amplitudes: wavelength and w0 must be > 0");
  }
  const double k = 2.0 * std::numbers::pi / s.wavelength;
  const double waist = 2.0 * s.w0;
  auto amp = [&](double z, double y) {
    return s.g0 * std::cos(k * z) * std::exp(-(y * y) / (waist * waist));
  };
  return {amp(s.z1, s.y1), amp(s.z2, s.y2)};
}

HamiltonianModel::HamiltonianModel(const ModelConfig& config, const OperatorSet& ops,
                                   double scale)
    : config_(config), scale_(scale) {
  if (ops.space.cutoff() != config.cutoff) {
    throw std::invalid_argument("hamiltonian: operator set cutoff " +
                                std::to_string(ops.space.cutoff()) +
                                " does not match config cutoff " + std::to_string(config.cutoff));
  }
  for (int j = 0; j < 2; ++j) {
    half_sz_[j] = 0.5 * scale * ops.sigma_z[j];
    exchange_[j] = scale * (ops.a_dag * ops.sigma_minus[j] + ops.a * ops.sigma_plus[j]);
  }
}

void HamiltonianModel::assemble(double tau, ComplexMatrix& out) const {
  const double d1 = detuning(tau, 1, config_.chirps);
  const double d2 = detuning(tau, 2, config_.chirps);
  const double e1 = coupling(tau, 1, config_.pulses);
  const double e2 = coupling(tau, 2, config_.pulses);
  out.noalias() = d1 * half_sz_[0];
  out.noalias() += d2 * half_sz_[1];
  out.noalias() += e1 * exchange_[0];
  out.noalias() += e2 * exchange_[1];
}

ComplexMatrix HamiltonianModel::at(double tau) const {
  ComplexMatrix h(half_sz_[0].rows(), half_sz_[0].cols());
  assemble(tau, h);
  return h;
}

Operator hamiltonian(double tau, const ModelConfig& config, const OperatorSet& ops) {
  return Operator{ops.space, HamiltonianModel(config, ops).at(tau)};
}

ComplexMatrix restrict_to(const ComplexMatrix& m, const std::vector<Eigen::Index>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  ComplexMatrix out(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) out(r, c) = m(idx[r], idx[c]);
  }
  return out;
}

double crossing_time(double g1, double g2, double delta) {
  if (!(g1 > 0.0) || !(g2 > 0.0)) {
    throw std::domain_error("crossing_time: couplings must be positive");
  }
  if (!(delta > 0.0)) throw std::domain_error("crossing_time: delta must be positive");
  return std::log(g1 / g2) / (4.0 * delta);
}

DimensionlessGeometry dimensionless_from_physical(const PhysicalGeometry& g) {
  if (!(g.w0 > 0.0) || !(g.v > 0.0) || !(g.delay > 0.0) || !(g.x0 > 0.0) ||
      !(g.half_width > 0.0)) {
    throw std::domain_error("dimensionless_from_physical: all inputs must be positive");
  }
  const double sigma = g.w0 / g.v;
  return {sigma, g.delay / (2.0 * sigma), (g.v * g.delay + g.x0) / (2.0 * g.w0),
          g.half_width / g.w0};
}

DecayRates decay_rates_from_physical(double sigma_seconds, double atomic_lifetime_s,
                                     double quality_factor, double mode_frequency_hz) {
  if (!(sigma_seconds > 0.0) || !(atomic_lifetime_s > 0.0) || !(quality_factor > 0.0) ||
      !(mode_frequency_hz > 0.0)) {
    throw std::domain_error("decay_rates_from_physical: all inputs must be positive");
  }
  const double omega_c = 2.0 * std::numbers::pi * mode_frequency_hz;
  return {omega_c / quality_factor * sigma_seconds, sigma_seconds / atomic_lifetime_s};
}

}  // namespace tcsim
