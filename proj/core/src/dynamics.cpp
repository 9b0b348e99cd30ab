#include "tcsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCore>

namespace tcsim {

namespace {

ode::StepControl step_control(const ModelConfig& config, const EvolveOptions& options) {
  ode::StepControl ctl;
  ctl.rtol = config.tol;
  ctl.atol = config.tol * 1e-3;
  ctl.h_max = options.h_max;
  ctl.h_init = std::min(1e-3, options.h_max);
  ctl.max_steps = options.max_steps;
  return ctl;
}

template <class State, class Wrap>
auto make_recorder(Trajectory<State>& traj, std::size_t stride, Wrap wrap) {
  return [&traj, stride, wrap, count = std::size_t{0}](double t, const auto& y) mutable {
    const bool first = count == 0;
    ++count;
    if (first || (stride > 0 && (count - 1) % stride == 0)) {
      traj.times.push_back(t);
      traj.states.push_back(wrap(y));
    }
  };
}

// Appends the final state unless the last recorded sample already is it.
template <class State>
void close_trajectory(Trajectory<State>& traj, double t_end, State final_state) {
  if (traj.times.back() != t_end) {
    traj.times.push_back(t_end);
    traj.states.push_back(std::move(final_state));
  }
}

}  // namespace

PureTrajectory evolve_state(const StateVector& psi0, const ModelConfig& config,
                            const EvolveOptions& options) {
  config.validate();
  if (!config.closed()) {
    throw std::invalid_argument("evolve_state: decay rates must be zero; use evolve_density");
  }
  if (psi0.space().cutoff() != config.cutoff) {
    throw std::invalid_argument("evolve_state: initial state cutoff does not match config");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("evolve_state: initial state is not normalized");
  }

  const HilbertSpace space = psi0.space();
  const OperatorSet ops = build_operators(space);
  const HamiltonianModel model(config, ops, kTimeJacobian);
  ComplexMatrix h(space.dim(), space.dim());

  auto rhs = [&](double tau, const ComplexVector& y, ComplexVector& dy) {
    model.assemble(tau, h);
    dy.noalias() = h * y;
    dy *= -kI;
  };

  PureTrajectory traj;
  ComplexVector y = psi0.amplitudes();
  auto record = make_recorder(traj, options.stride,
                              [&](const ComplexVector& v) { return StateVector(space, v); });
  const auto stats =
      ode::integrate(rhs, y, config.window.start, config.window.end, step_control(config, options),
                     record);
  if (options.stats != nullptr) *options.stats = stats;
  close_trajectory(traj, config.window.end, StateVector(space, y));
  return traj;
}

MixedTrajectory evolve_density(const DensityMatrix& rho0, const ModelConfig& config,
                               const EvolveOptions& options) {
  config.validate();
  if (rho0.space().cutoff() != config.cutoff) {
    throw std::invalid_argument("evolve_density: initial state cutoff does not match config");
  }
  if (!rho0.is_valid()) throw std::invalid_argument("evolve_density: invalid initial density");

  const HilbertSpace space = rho0.space();
  const OperatorSet ops = build_operators(space);
  const HamiltonianModel model(config, ops, kTimeJacobian);

  using Sparse = Eigen::SparseMatrix<Complex>;
  const Eigen::Index dim = space.dim();

  // Jump operators with the time Jacobian folded into the rates.
  std::vector<Sparse> jumps, jumps_dag;
  auto add_jump = [&](double rate, const ComplexMatrix& op) {
    const ComplexMatrix l = std::sqrt(kTimeJacobian * rate) * op;
    jumps.push_back(l.sparseView());
    jumps_dag.push_back(l.adjoint().sparseView());
  };
  if (config.gamma_c > 0.0) add_jump(config.gamma_c, ops.a);
  if (config.gamma_s > 0.0) {
    for (int j = 0; j < 2; ++j) add_jump(config.gamma_s, ops.sigma_minus[j]);
  }
  ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < jumps.size(); ++k) anti += ComplexMatrix(jumps_dag[k] * jumps[k]);

  // Fixed sparsity pattern of Heff: the diagonal plus every coupling entry.
  ComplexMatrix probe = ComplexMatrix::Identity(dim, dim);
  for (double t : {-config.pulses.delta, 0.0, config.pulses.delta}) {
    probe += model.at(t).cwiseAbs().cast<Complex>();
  }
  probe += anti.cwiseAbs().cast<Complex>();
  Sparse heff = probe.sparseView();
  heff.makeCompressed();

  ComplexMatrix dense(dim, dim);
  ComplexMatrix tmp(dim, dim);

  // d rho = -i (Heff rho - rho Heff^dag) + sum_k L rho L^dag, Heff = H - i/2 sum L^dag L
  auto rhs = [&](double tau, const ComplexMatrix& y, ComplexMatrix& dy) {
    model.assemble(tau, dense);
    dense.noalias() -= (0.5 * kI) * anti;
    for (Eigen::Index c = 0; c < heff.outerSize(); ++c) {
      for (Sparse::InnerIterator it(heff, c); it; ++it) it.valueRef() = dense(it.row(), it.col());
    }
    tmp.noalias() = heff * y;
    dy = -kI * tmp;
    dy += kI * tmp.adjoint();  // (Heff rho)^dag = rho Heff^dag for Hermitian rho
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      tmp.noalias() = jumps[k] * y;
      dy.noalias() += tmp * jumps_dag[k];
    }
  };

  MixedTrajectory traj;
  ComplexMatrix y = rho0.entries();
  auto record = make_recorder(traj, options.stride,
                              [&](const ComplexMatrix& m) { return DensityMatrix(space, m); });
  const auto stats =
      ode::integrate(rhs, y, config.window.start, config.window.end, step_control(config, options),
                     record);
  if (options.stats != nullptr) *options.stats = stats;
  close_trajectory(traj, config.window.end, DensityMatrix(space, y));
  return traj;
}

Complex SectorPropagator::element(const HilbertSpace& space, const BasisState& to,
                                  const BasisState& from) const {
  const Eigen::Index ti = space.index(to);
  const Eigen::Index fi = space.index(from);
  Eigen::Index r = -1, c = -1;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k] == ti) r = static_cast<Eigen::Index>(k);
    if (basis[k] == fi) c = static_cast<Eigen::Index>(k);
  }
  if (r < 0 || c < 0) {
    throw std::out_of_range("SectorPropagator: state outside sector " + std::to_string(sector));
  }
  return matrix(r, c);
}

SectorPropagator extract_propagator(const ModelConfig& config, int sector,
                                    const EvolveOptions& options) {
  if (!config.closed()) {
    throw std::invalid_argument("extract_propagator: decay rates must be zero");
  }
  const HilbertSpace space(config.cutoff);
  SectorPropagator out;
  out.sector = sector;
  out.basis = sector_indices(space, sector);
  if (out.basis.empty()) {
    throw std::invalid_argument("extract_propagator: sector " + std::to_string(sector) +
                                " is empty at cutoff " + std::to_string(config.cutoff));
  }
  const auto k = static_cast<Eigen::Index>(out.basis.size());
  out.matrix = ComplexMatrix::Zero(k, k);
  EvolveOptions opts = options;
  opts.stride = 0;
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto traj = evolve_state(StateVector::basis(space, space.state(out.basis[c])), config,
                                   opts);
    const ComplexVector& v = traj.final().amplitudes();
    for (Eigen::Index r = 0; r < k; ++r) out.matrix(r, c) = v(out.basis[r]);
  }
  return out;
}

}  // namespace tcsim
