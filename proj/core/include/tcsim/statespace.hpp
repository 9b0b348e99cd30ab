#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tcsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class Level : std::uint8_t { Ground = 0, Excited = 1 };

/// Bare product state |n; s1, s2> of the cavity mode and the two atoms.
struct BasisState {
  int n = 0;
  Level s1 = Level::Ground;
  Level s2 = Level::Ground;

  [[nodiscard]] int excitations() const noexcept {
    return n + static_cast<int>(s1) + static_cast<int>(s2);
  }
  friend bool operator==(const BasisState&, const BasisState&) = default;
};

std::string to_string(const BasisState& b);

/// Fock space truncated at `cutoff` photons, tensored with two qubits.
///
/// Basis ordering is lexicographic in (n, s1, s2) with the atoms varying
/// fastest, so index = 4n + 2 s1 + s2 with ground = 0 and excited = 1.
class HilbertSpace {
 public:
  explicit HilbertSpace(int cutoff);

  [[nodiscard]] int cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return 4 * (cutoff_ + 1); }

  /// Throws std::out_of_range when b.n exceeds the cutoff.
  [[nodiscard]] Eigen::Index index(const BasisState& b) const;
  [[nodiscard]] BasisState state(Eigen::Index i) const;

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  int cutoff_;
};

inline Eigen::Index basis_index(const BasisState& b, const HilbertSpace& space) {
  return space.index(b);
}
inline BasisState basis_unindex(Eigen::Index i, const HilbertSpace& space) {
  return space.state(i);
}

/// Dense operator on a truncated space.
struct Operator {
  HilbertSpace space;
  ComplexMatrix matrix;

  [[nodiscard]] bool is_hermitian(double rel_tol = 1e-12) const;
};

class StateVector {
 public:
  StateVector(HilbertSpace space, ComplexVector amplitudes);

  static StateVector basis(const HilbertSpace& space, const BasisState& b);

  [[nodiscard]] const HilbertSpace& space() const noexcept { return space_; }
  [[nodiscard]] const ComplexVector& amplitudes() const noexcept { return amps_; }
  [[nodiscard]] ComplexVector& amplitudes() noexcept { return amps_; }
  [[nodiscard]] Complex operator[](const BasisState& b) const {
    return amps_(space_.index(b));
  }
  [[nodiscard]] double norm() const { return amps_.norm(); }
  void normalize();

 private:
  HilbertSpace space_;
  ComplexVector amps_;
};

class DensityMatrix {
 public:
  DensityMatrix(HilbertSpace space, ComplexMatrix entries);
  explicit DensityMatrix(const StateVector& psi);

  [[nodiscard]] const HilbertSpace& space() const noexcept { return space_; }
  [[nodiscard]] const ComplexMatrix& entries() const noexcept { return rho_; }
  [[nodiscard]] ComplexMatrix& entries() noexcept { return rho_; }
  [[nodiscard]] double trace() const { return rho_.trace().real(); }
  [[nodiscard]] double min_eigenvalue() const;

  /// Hermiticity, unit trace and numerical positivity.
  [[nodiscard]] bool is_valid(double herm_tol = 1e-10, double trace_tol = 1e-8,
                              double psd_tol = 1e-8) const;

 private:
  HilbertSpace space_;
  ComplexMatrix rho_;
};

/// Ladder, Pauli and excitation-number operators on one space.
struct OperatorSet {
  HilbertSpace space;
  ComplexMatrix a;
  ComplexMatrix a_dag;
  ComplexMatrix number;         // a^dag a
  ComplexMatrix sigma_plus[2];  // index 0 -> atom 1
  ComplexMatrix sigma_minus[2];
  ComplexMatrix sigma_z[2];
  ComplexMatrix n_exc;          // a^dag a + sum_j sigma_+^j sigma_-^j
};

OperatorSet build_operators(const HilbertSpace& space);

/// Indices of the basis states with the given excitation number, in basis order.
std::vector<Eigen::Index> sector_indices(const HilbertSpace& space, int excitations);

/// Subsystem selection for partial traces. Kept factors appear in the
/// order cavity, atom 1, atom 2.
enum Subsystem : unsigned {
  kCavity = 1u << 0,
  kAtom1 = 1u << 1,
  kAtom2 = 1u << 2,
  kAtoms = kAtom1 | kAtom2,
  kAll = kCavity | kAtom1 | kAtom2,
};

/// Reduced density matrix over the kept subsystems. Throws
/// std::invalid_argument when `keep` is empty or selects everything.
ComplexMatrix partial_trace(const StateVector& psi, unsigned keep);
ComplexMatrix partial_trace(const DensityMatrix& rho, unsigned keep);

/// tr(rho^2).
double purity(const ComplexMatrix& rho);
inline double purity(const DensityMatrix& rho) { return purity(rho.entries()); }

}  // namespace tcsim
