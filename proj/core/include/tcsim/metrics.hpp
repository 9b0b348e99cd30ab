#pragma once

#include "tcsim/statespace.hpp"

namespace tcsim {

/// 4x4 density matrix of the atom pair, basis index 2 s1 + s2.
class TwoQubitDensity {
 public:
  /// Throws std::invalid_argument unless Hermitian, unit-trace and PSD
  /// within `tol`.
  explicit TwoQubitDensity(ComplexMatrix entries, double tol = 1e-8);

  static TwoQubitDensity from_pure(const Eigen::Vector4cd& psi);

  [[nodiscard]] const ComplexMatrix& entries() const noexcept { return rho_; }

 private:
  ComplexMatrix rho_;
};

/// Overlap magnitude |<target|psi>|.
double fidelity(const StateVector& state, const StateVector& target);

/// sqrt(<target|rho|target>).
double fidelity(const DensityMatrix& state, const StateVector& target);

/// sqrt(3 - tr rho_1^2 - tr rho_2^2 - tr rho_c^2) for a pure state.
double concurrence_c3(const StateVector& psi);

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}, l_i the square roots of
/// the eigenvalues of rho (sy x sy) rho* (sy x sy) in descending order.
double wootters_concurrence(const TwoQubitDensity& rho);

/// Reduction to the atom pair, renormalized by its trace, followed by the
/// Wootters measure.
double atomic_concurrence(const StateVector& psi);
double atomic_concurrence(const DensityMatrix& rho);

double mean_photon(const StateVector& psi);
double mean_photon(const DensityMatrix& rho);

/// Frobenius norm of rho - |0><0| (x) tr_cavity(rho).
double factorization_residual(const DensityMatrix& rho);
double factorization_residual(const StateVector& psi);

/// (|g> + |e>)/sqrt(2) per atom with the cavity in vacuum.
StateVector product_plus_state(const HilbertSpace& space);

/// (|g2>(|g1> - |e1>) + |e2>(|g1> + |e1>)) / 2 with the cavity in vacuum.
StateVector entangled_target(const HilbertSpace& space);

}  // namespace tcsim
