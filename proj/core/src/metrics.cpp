#include "tcsim/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace tcsim {

namespace {

void require_same_space(const HilbertSpace& a, const HilbertSpace& b) {
  if (!(a == b)) throw std::invalid_argument("fidelity: state and target live on different spaces");
}

Eigen::Matrix4cd sigma_yy() {
  Eigen::Matrix2cd sy;
  sy << 0.0, -kI, kI, 0.0;
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = sy(i, j) * sy;
  return out;
}

StateVector vacuum_atoms(const HilbertSpace& space, const std::array<Complex, 4>& amps) {
  ComplexVector v = ComplexVector::Zero(space.dim());
  for (int i = 0; i < 4; ++i) v(i) = amps[static_cast<std::size_t>(i)];
  return StateVector(space, std::move(v));
}

}  // namespace

TwoQubitDensity::TwoQubitDensity(ComplexMatrix entries, double tol) : rho_(std::move(entries)) {
  if (rho_.rows() != 4 || rho_.cols() != 4) {
    throw std::invalid_argument("TwoQubitDensity: expected a 4x4 matrix");
  }
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("TwoQubitDensity: matrix is not Hermitian");
  }
  if (std::abs(rho_.trace() - 1.0) > tol) {
    throw std::invalid_argument("TwoQubitDensity: trace differs from one");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho_ + rho_.adjoint()),
                                                   Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("TwoQubitDensity: matrix is not positive semidefinite");
  }
}

TwoQubitDensity TwoQubitDensity::from_pure(const Eigen::Vector4cd& psi) {
  return TwoQubitDensity(psi * psi.adjoint());
}

double fidelity(const StateVector& state, const StateVector& target) {
  require_same_space(state.space(), target.space());
  return std::abs(target.amplitudes().dot(state.amplitudes()));
}

double fidelity(const DensityMatrix& state, const StateVector& target) {
  require_same_space(state.space(), target.space());
  const ComplexVector& t = target.amplitudes();
  const double pop = t.dot(state.entries() * t).real();
  return std::sqrt(std::max(pop, 0.0));
}

double concurrence_c3(const StateVector& psi) {
  const double s = 3.0 - purity(partial_trace(psi, kAtom1)) - purity(partial_trace(psi, kAtom2)) -
                   purity(partial_trace(psi, kCavity));
  return std::sqrt(std::max(s, 0.0));
}

double wootters_concurrence(const TwoQubitDensity& state) {
  const ComplexMatrix& rho = state.entries();
  static const Eigen::Matrix4cd yy = sigma_yy();
  const ComplexMatrix flipped = yy * rho.conjugate() * yy;

  // Spectrum of rho * flipped via the similar Hermitian form.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()));
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix root = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  const ComplexMatrix m = root * flipped * root;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> em(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);

  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) {
    const double v = em.eigenvalues()(i);
    lam[static_cast<std::size_t>(i)] = std::sqrt(v < 1e-10 ? std::max(v, 0.0) : v);
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

namespace {

TwoQubitDensity normalized_pair(const ComplexMatrix& reduced) {
  const double tr = reduced.trace().real();
  if (!(tr > 0.0)) throw std::invalid_argument("atomic_concurrence: reduced state has zero trace");
  return TwoQubitDensity(reduced / tr);
}

}  // namespace

double atomic_concurrence(const StateVector& psi) {
  return wootters_concurrence(normalized_pair(partial_trace(psi, kAtoms)));
}

double atomic_concurrence(const DensityMatrix& rho) {
  return wootters_concurrence(normalized_pair(partial_trace(rho, kAtoms)));
}

double mean_photon(const StateVector& psi) {
  double n = 0.0;
  const ComplexVector& v = psi.amplitudes();
  for (Eigen::Index i = 0; i < v.size(); ++i) n += (i / 4) * std::norm(v(i));
  return n;
}

double mean_photon(const DensityMatrix& rho) {
  double n = 0.0;
  const ComplexMatrix& m = rho.entries();
  for (Eigen::Index i = 0; i < m.rows(); ++i) n += static_cast<double>(i / 4) * m(i, i).real();
  return n;
}

double factorization_residual(const DensityMatrix& rho) {
  const ComplexMatrix atoms = partial_trace(rho, kAtoms);
  ComplexMatrix model = ComplexMatrix::Zero(rho.entries().rows(), rho.entries().cols());
  model.topLeftCorner(4, 4) = atoms;  // |0><0| occupies the first four indices
  return (rho.entries() - model).norm();
}

double factorization_residual(const StateVector& psi) {
  return factorization_residual(DensityMatrix(psi));
}

StateVector product_plus_state(const HilbertSpace& space) {
  return vacuum_atoms(space, {0.5, 0.5, 0.5, 0.5});
}

StateVector entangled_target(const HilbertSpace& space) {
  // index 2 s1 + s2: |g g>, |g e>, |e g>, |e e>
  return vacuum_atoms(space, {0.5, 0.5, -0.5, 0.5});
}

}  // namespace tcsim
