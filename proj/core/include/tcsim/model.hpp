#pragma once

#include <utility>
#include <vector>

#include "tcsim/statespace.hpp"

namespace tcsim {

/// dt = 2 sigma d(tau). Rates are carried in units of 1/sigma, so every
/// generator integrated in tau is multiplied by this factor exactly once.
inline constexpr double kTimeJacobian = 2.0;

struct PulseParams {
  double g1 = 30.0;     // 1/sigma
  double g2 = 30.0;     // 1/sigma, may be negative
  double delta = 1.25;  // half delay
};

/// Stark chirps. Atom 1 sees +delta0 centred at -tau0, atom 2 sees -delta0
/// centred at +tau0.
struct ChirpParams {
  double delta0 = 0.0;  // 1/sigma
  double tau0 = 2.0;
  double sigma_s = 0.2;
};

/// Atom positions relative to the mode. Lengths share one arbitrary unit.
struct SpatialConfig {
  double g0 = 30.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double wavelength = 1.0;
  double w0 = 1.0;
};

struct Window {
  double start = -7.25;
  double end = 7.25;
};

struct ModelConfig {
  PulseParams pulses;
  ChirpParams chirps;
  int cutoff = 3;
  double gamma_c = 0.0;  // cavity decay, 1/sigma
  double gamma_s = 0.0;  // spontaneous emission per atom, 1/sigma
  Window window;
  double tol = 1e-10;    // integrator relative tolerance

  [[nodiscard]] bool closed() const noexcept { return gamma_c == 0.0 && gamma_s == 0.0; }

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// Window outside of which every pulse and chirp is below e^-20 of its peak.
Window default_window(const PulseParams& p, const ChirpParams& c);

/// Symmetric configuration: g1 = g2 = g0, window chosen by default_window.
ModelConfig symmetric_config(double g0, double delta, double delta0, double tau0,
                             double sigma_s);

/// eta_j(tau). j is 1 or 2.
double coupling(double tau, int j, const PulseParams& p);

/// Delta_j(tau). j is 1 or 2.
double detuning(double tau, int j, const ChirpParams& c);

/// g_j = g0 cos(k z_j) exp(-y_j^2 / (2 w0)^2).
std::pair<double, double> spatial_amplitudes(const SpatialConfig& s);

/// Hamiltonian at tau in units of 1/sigma. Throws std::invalid_argument
/// when the operator set was built for a different cutoff.
Operator hamiltonian(double tau, const ModelConfig& config, const OperatorSet& ops);

/// Precomputed term matrices for repeated H(tau) assembly. All terms are
/// multiplied by `scale` at construction.
class HamiltonianModel {
 public:
  HamiltonianModel(const ModelConfig& config, const OperatorSet& ops, double scale = 1.0);

  [[nodiscard]] ComplexMatrix at(double tau) const;
  void assemble(double tau, ComplexMatrix& out) const;
  [[nodiscard]] const ModelConfig& config() const noexcept { return config_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }

 private:
  ModelConfig config_;
  double scale_;
  ComplexMatrix half_sz_[2];
  ComplexMatrix exchange_[2];  // a^dag sigma_-^j + a sigma_+^j
};

/// Restriction of a full-space matrix to the given basis indices.
ComplexMatrix restrict_to(const ComplexMatrix& m, const std::vector<Eigen::Index>& idx);

/// Time at which eta_1 = eta_2: ln(g1/g2) / (4 delta). Throws
/// std::domain_error unless g1, g2 > 0 and delta > 0.
double crossing_time(double g1, double g2, double delta);

struct PhysicalGeometry {
  double w0;       // mode half-waist
  double v;        // atom velocity
  double delay;    // Delta t
  double x0;       // Stark-field offset
  double half_width;  // L, half-width of the Stark fields
};

struct DimensionlessGeometry {
  double sigma;  // w0 / v
  double delta;
  double tau0;
  double sigma_s;
};

/// Throws std::domain_error on nonpositive input.
DimensionlessGeometry dimensionless_from_physical(const PhysicalGeometry& g);

struct DecayRates {
  double gamma_c;
  double gamma_s;
};

/// gamma_s = sigma / T_at and gamma_c = omega_c sigma / Q, both in 1/sigma.
DecayRates decay_rates_from_physical(double sigma_seconds, double atomic_lifetime_s,
                                     double quality_factor, double mode_frequency_hz);

/// Assumed cavity frequency for the Q-factor mapping (microwave Fabry-Perot
/// experiments with circular Rydberg atoms).
inline constexpr double kDefaultModeFrequencyHz = 51.0e9;

}  // namespace tcsim
