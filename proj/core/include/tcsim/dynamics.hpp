#pragma once

#include <cstddef>
#include <vector>

#include "tcsim/model.hpp"
#include "tcsim/ode.hpp"
#include "tcsim/statespace.hpp"

namespace tcsim {

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  [[nodiscard]] const State& final() const { return states.back(); }
  [[nodiscard]] double final_time() const { return times.back(); }
};

using PureTrajectory = Trajectory<StateVector>;
using MixedTrajectory = Trajectory<DensityMatrix>;

struct EvolveOptions {
  /// Record every `stride`-th accepted step; 0 keeps only the initial and
  /// final states.
  std::size_t stride = 0;
  /// Upper step bound in tau. Smaller than the chirp width so that an
  /// otherwise idle stretch cannot step across a Stark pulse.
  double h_max = 0.02;
  std::size_t max_steps = 2'000'000;
  ode::Stats* stats = nullptr;
};

/// Schroedinger evolution over config.window. Requires a closed config and a
/// normalized initial state; throws IntegrationError on step-control failure.
PureTrajectory evolve_state(const StateVector& psi0, const ModelConfig& config,
                            const EvolveOptions& options = {});

/// Zero-temperature master equation with cavity loss gamma_c and
/// per-atom spontaneous emission gamma_s.
MixedTrajectory evolve_density(const DensityMatrix& rho0, const ModelConfig& config,
                               const EvolveOptions& options = {});

/// Unitary of one excitation sector across the window. Rows and columns
/// follow `basis` (full-space indices in basis order).
struct SectorPropagator {
  int sector = 0;
  std::vector<Eigen::Index> basis;
  ComplexMatrix matrix;

  [[nodiscard]] Complex element(const HilbertSpace& space, const BasisState& to,
                                const BasisState& from) const;
};

SectorPropagator extract_propagator(const ModelConfig& config, int sector,
                                    const EvolveOptions& options = {});

}  // namespace tcsim
