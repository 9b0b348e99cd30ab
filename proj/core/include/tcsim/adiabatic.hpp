#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tcsim/model.hpp"
#include "tcsim/statespace.hpp"

namespace tcsim {

struct EigenSample {
  double tau;
  double energy;         // 1/sigma
  ComplexVector vector;  // sector-local coordinates
  bool near_crossing;
};

struct EigenCurve {
  int sector;
  int curve_id;  // rank of the branch at the first grid point, ascending
  std::vector<EigenSample> samples;
};

struct SpectrumScan {
  int sector;
  std::vector<Eigen::Index> basis;
  std::vector<EigenCurve> curves;
  std::vector<double> crossings;  // interpolated crossing times
};

struct SpectrumOptions {
  double overlap_threshold = 0.9;
  double degeneracy_tol = 1e-8;  // relative to the spectral radius
};

/// Eigenvalues of H(tau) on one excitation sector, followed along the grid
/// by maximal eigenvector overlap. Branches pass through exact crossings.
/// Throws TrackingError when matching is ambiguous away from a crossing.
SpectrumScan instantaneous_spectrum(const ModelConfig& config, std::span<const double> grid,
                                    int sector, const SpectrumOptions& options = {});

/// Uniform grid helper, both ends included.
std::vector<double> linspace(double lo, double hi, std::size_t points);

struct GapMinimum {
  double tau;
  double gap;
};

/// Minimum of the gap between sorted eigenvalues `lower` and `lower + 1` of
/// the sector block on [lo, hi] (grid scan followed by golden-section refinement).
GapMinimum minimum_gap(const ModelConfig& config, int sector, int lower, double lo, double hi,
                       std::size_t scan_points = 2001);

struct QuadratureOptions {
  double abs_tol = 1e-8;
  unsigned max_depth = 18;
};

/// Stark-chirp correction to the adiabatic phase of sector label n (n >= -1).
/// Includes the time Jacobian, so the result is in radians.
double chirp_phase_shift(const ModelConfig& config, int n, const QuadratureOptions& q = {});

/// Dynamical phase of the outermost adiabatic branch of sector n + 2 with
/// the chirps switched off. The branch is the one continuously connected to
/// the |n+1; e, g> - |n+2; g, g> doublet while atom 1 is in the mode.
double resonant_phase(const ModelConfig& config, int n, const QuadratureOptions& q = {});

struct PhasePair {
  double phi_n;
  double shift;
  double phi_tilde;
};

PhasePair adiabatic_phases(const ModelConfig& config, int n, const QuadratureOptions& q = {});

/// Ideal adiabatic propagator for symmetric couplings. `phase(n)` gives the
/// shifted phase of sector label n. Throws std::invalid_argument when the
/// state has support on |N; e, g> or |N; g, e> at the cutoff N.
StateVector ideal_map(const StateVector& state, const std::function<double(int)>& phase);

/// Same phase for every sector label.
StateVector ideal_map(const StateVector& state, double phi_tilde);

/// Full-space matrix of the ideal map; identity on truncated partners.
ComplexMatrix ideal_map_matrix(const HilbertSpace& space, const std::function<double(int)>& phase);

/// |3 + cos(phi)| / 4.
double predicted_fidelity(double phi_tilde);

struct ChirpSolution {
  double delta0;
  double phase;     // phi_n + shift at the root
  double residual;  // phase - 2 m pi
  int m;
};

/// Chirp amplitude (1/sigma) closing phi_{-1} + shift to 2 m pi. Throws
/// NoRootError when 2 m pi is outside the attainable range on
/// [0, delta0_max]; delta0_max <= 0 selects 5 g1.
ChirpSolution solve_chirp_amplitude(const ModelConfig& config, int m, double delta0_max = 0.0);

/// Smallest nonnegative chirp that closes the phase, i.e. m = ceil(phi_{-1} / 2 pi).
ChirpSolution smallest_chirp_amplitude(const ModelConfig& config, double delta0_max = 0.0);

}  // namespace tcsim
