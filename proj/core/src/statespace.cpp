#include "tcsim/statespace.hpp"

#include <algorithm>
#include <stdexcept>

namespace tcsim {

namespace {

char level_char(Level s) { return s == Level::Excited ? 'e' : 'g'; }

// Decomposes a full index into (n, s1, s2) digits.
inline void digits(Eigen::Index i, Eigen::Index out[3]) {
  out[0] = i / 4;
  out[1] = (i / 2) % 2;
  out[2] = i % 2;
}

ComplexMatrix trace_out(const HilbertSpace& space, unsigned keep,
                        const auto& element /* (i, j) -> Complex */) {
  if (keep == 0 || (keep & kAll) == kAll || (keep & ~static_cast<unsigned>(kAll)) != 0) {
    throw std::invalid_argument("partial_trace: keep must be a nonempty proper subset");
  }
  const Eigen::Index dims[3] = {space.cutoff() + 1, 2, 2};
  const bool kept[3] = {(keep & kCavity) != 0, (keep & kAtom1) != 0, (keep & kAtom2) != 0};

  Eigen::Index out_dim = 1;
  for (int f = 0; f < 3; ++f) {
    if (kept[f]) out_dim *= dims[f];
  }
  auto reduced_index = [&](const Eigen::Index d[3]) {
    Eigen::Index r = 0;
    for (int f = 0; f < 3; ++f) {
      if (kept[f]) r = r * dims[f] + d[f];
    }
    return r;
  };

  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  const Eigen::Index dim = space.dim();
  Eigen::Index di[3], dj[3];
  for (Eigen::Index i = 0; i < dim; ++i) {
    digits(i, di);
    for (Eigen::Index j = 0; j < dim; ++j) {
      digits(j, dj);
      bool traced_match = true;
      for (int f = 0; f < 3; ++f) {
        if (!kept[f] && di[f] != dj[f]) {
          traced_match = false;
          break;
        }
      }
      if (traced_match) out(reduced_index(di), reduced_index(dj)) += element(i, j);
    }
  }
  return out;
}

}  // namespace

std::string to_string(const BasisState& b) {
  std::string s = "|";
  s += std::to_string(b.n);
  s += ';';
  s += level_char(b.s1);
  s += ',';
  s += level_char(b.s2);
  s += '>';
  return s;
}

HilbertSpace::HilbertSpace(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw std::invalid_argument("HilbertSpace: cutoff must be >= 0");
}

Eigen::Index HilbertSpace::index(const BasisState& b) const {
  if (b.n < 0 || b.n > cutoff_) {
    throw std::out_of_range("basis_index: photon number " + std::to_string(b.n) +
                            " outside [0, " + std::to_string(cutoff_) + "]");
  }
  return 4 * b.n + 2 * static_cast<int>(b.s1) + static_cast<int>(b.s2);
}

BasisState HilbertSpace::state(Eigen::Index i) const {
  if (i < 0 || i >= dim()) {
    throw std::out_of_range("basis_unindex: index " + std::to_string(i) + " outside space");
  }
  return BasisState{static_cast<int>(i / 4), static_cast<Level>((i / 2) % 2),
                    static_cast<Level>(i % 2)};
}

bool Operator::is_hermitian(double rel_tol) const {
  const double scale = std::max(matrix.norm(), 1.0);
  return (matrix - matrix.adjoint()).norm() <= rel_tol * scale;
}

StateVector::StateVector(HilbertSpace space, ComplexVector amplitudes)
    : space_(space), amps_(std::move(amplitudes)) {
  if (amps_.size() != space_.dim()) {
    throw std::invalid_argument("StateVector: amplitude count does not match space");
  }
}

StateVector StateVector::basis(const HilbertSpace& space, const BasisState& b) {
  ComplexVector v = ComplexVector::Zero(space.dim());
  v(space.index(b)) = 1.0;
  return StateVector(space, std::move(v));
}

void StateVector::normalize() {
  const double nrm = amps_.norm();
  if (nrm == 0.0) throw std::domain_error("StateVector: cannot normalize zero vector");
  amps_ /= nrm;
}

DensityMatrix::DensityMatrix(HilbertSpace space, ComplexMatrix entries)
    : space_(space), rho_(std::move(entries)) {
  if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim()) {
    throw std::invalid_argument("DensityMatrix: shape does not match space");
  }
}

DensityMatrix::DensityMatrix(const StateVector& psi)
    : space_(psi.space()), rho_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_valid(double herm_tol, double trace_tol, double psd_tol) const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
  if (std::abs(rho_.trace() - 1.0) > trace_tol) return false;
  return min_eigenvalue() >= -psd_tol;
}

OperatorSet build_operators(const HilbertSpace& space) {
  const Eigen::Index dim = space.dim();
  OperatorSet ops{space, ComplexMatrix::Zero(dim, dim), {}, {}, {}, {}, {}, {}};
  for (int j = 0; j < 2; ++j) {
    ops.sigma_plus[j] = ComplexMatrix::Zero(dim, dim);
    ops.sigma_z[j] = ComplexMatrix::Zero(dim, dim);
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    const BasisState b = space.state(i);
    if (b.n > 0) {
      ops.a(space.index({b.n - 1, b.s1, b.s2}), i) = std::sqrt(static_cast<double>(b.n));
    }
    if (b.s1 == Level::Ground) ops.sigma_plus[0](space.index({b.n, Level::Excited, b.s2}), i) = 1.0;
    if (b.s2 == Level::Ground) ops.sigma_plus[1](space.index({b.n, b.s1, Level::Excited}), i) = 1.0;
    ops.sigma_z[0](i, i) = b.s1 == Level::Excited ? 1.0 : -1.0;
    ops.sigma_z[1](i, i) = b.s2 == Level::Excited ? 1.0 : -1.0;
  }
  ops.a_dag = ops.a.adjoint();
  ops.number = ops.a_dag * ops.a;
  ops.n_exc = ops.number;
  for (int j = 0; j < 2; ++j) {
    ops.sigma_minus[j] = ops.sigma_plus[j].adjoint();
    ops.n_exc += ops.sigma_plus[j] * ops.sigma_minus[j];
  }
  return ops;
}

std::vector<Eigen::Index> sector_indices(const HilbertSpace& space, int excitations) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    if (space.state(i).excitations() == excitations) idx.push_back(i);
  }
  return idx;
}

ComplexMatrix partial_trace(const StateVector& psi, unsigned keep) {
  const ComplexVector& v = psi.amplitudes();
  return trace_out(psi.space(), keep,
                   [&](Eigen::Index i, Eigen::Index j) { return v(i) * std::conj(v(j)); });
}

ComplexMatrix partial_trace(const DensityMatrix& rho, unsigned keep) {
  const ComplexMatrix& m = rho.entries();
  return trace_out(rho.space(), keep, [&](Eigen::Index i, Eigen::Index j) { return m(i, j); });
}

double purity(const ComplexMatrix& rho) {
  // tr(rho^2) = sum_ij rho_ij rho_ji
  return (rho.cwiseProduct(rho.transpose())).sum().real();
}

}  // namespace tcsim
