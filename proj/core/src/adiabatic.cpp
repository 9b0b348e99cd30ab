#include "tcsim/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "tcsim/errors.hpp"

namespace tcsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct SectorBlock {
  std::vector<Eigen::Index> basis;
  HamiltonianModel model;
  ComplexMatrix full;

  SectorBlock(const ModelConfig& config, const OperatorSet& ops, int sector)
      : basis(sector_indices(ops.space, sector)), model(config, ops), full(ops.space.dim(), ops.space.dim()) {
    if (basis.empty()) {
      throw std::invalid_argument("sector " + std::to_string(sector) + " is empty at cutoff " +
                                  std::to_string(config.cutoff));
    }
  }

  ComplexMatrix at(double tau) {
    model.assemble(tau, full);
    return restrict_to(full, basis);
  }
};

/// The sector must contain every state it has in the untruncated space.
void require_complete_sector(const ModelConfig& config, int sector) {
  if (sector < 0 || sector > config.cutoff) {
    throw std::invalid_argument("sector " + std::to_string(sector) +
                                " is truncated at cutoff " + std::to_string(config.cutoff));
  }
}

double integrate_checked(const std::function<double(double)>& f, std::vector<double> breaks,
                         const QuadratureOptions& q, const char* what) {
  using boost::math::quadrature::gauss_kronrod;
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    double err = 0.0;
    total += gauss_kronrod<double, 31>::integrate(f, breaks[i], breaks[i + 1], q.max_depth, 1e-13,
                                                  &err);
    total_err += err;
  }
  if (!(total_err <= q.abs_tol) || !std::isfinite(total)) {
    throw QuadratureError(std::string(what) + ": quadrature error estimate " +
                          std::to_string(total_err) + " exceeds tolerance");
  }
  return total;
}

std::vector<double> window_breaks(const ModelConfig& config, std::initializer_list<double> inner) {
  std::vector<double> b{config.window.start, config.window.end};
  for (double x : inner) {
    if (x > config.window.start && x < config.window.end) b.push_back(x);
  }
  return b;
}

// sqrt(a^2 + b^2) - b for b >= 0 without cancellation.
double radical_excess(double a, double b) {
  const double r = std::hypot(a, b);
  return r + b > 0.0 ? a * a / (r + b) : 0.0;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("linspace: need at least two points");
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

SpectrumScan instantaneous_spectrum(const ModelConfig& config, std::span<const double> grid,
                                    int sector, const SpectrumOptions& options) {
  if (grid.size() < 2) throw std::invalid_argument("instantaneous_spectrum: grid too short");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("instantaneous_spectrum: grid must be strictly increasing");
    }
  }
  const OperatorSet ops = build_operators(HilbertSpace(config.cutoff));
  SectorBlock block(config, ops, sector);
  const auto dim = static_cast<Eigen::Index>(block.basis.size());

  SpectrumScan scan;
  scan.sector = sector;
  scan.basis = block.basis;
  scan.curves.resize(static_cast<std::size_t>(dim));
  std::vector<ComplexVector> reference(static_cast<std::size_t>(dim));

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double tau = grid[gi];
    es.compute(block.at(tau));
    const Eigen::VectorXd& vals = es.eigenvalues();
    const ComplexMatrix& vecs = es.eigenvectors();
    const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
    const double tol = options.degeneracy_tol * scale;

    // Group near-degenerate eigenvalues (sorted ascending).
    std::vector<int> group_of(static_cast<std::size_t>(dim));
    std::vector<std::vector<Eigen::Index>> groups;
    for (Eigen::Index m = 0; m < dim; ++m) {
      if (m == 0 || vals(m) - vals(m - 1) > tol) groups.emplace_back();
      groups.back().push_back(m);
      group_of[static_cast<std::size_t>(m)] = static_cast<int>(groups.size()) - 1;
    }

    if (gi == 0) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        auto& curve = scan.curves[static_cast<std::size_t>(k)];
        curve.sector = sector;
        curve.curve_id = static_cast<int>(k);
        const bool degen = groups[static_cast<std::size_t>(group_of[static_cast<std::size_t>(k)])].size() > 1;
        curve.samples.push_back({tau, vals(k), vecs.col(k), degen});
        reference[static_cast<std::size_t>(k)] = vecs.col(k);
      }
      continue;
    }

    // Overlap of each curve's reference vector with each degenerate group.
    struct Candidate {
      double overlap;
      Eigen::Index curve;
      std::size_t group;
    };
    std::vector<Candidate> cands;
    for (Eigen::Index k = 0; k < dim; ++k) {
      for (std::size_t g = 0; g < groups.size(); ++g) {
        double s = 0.0;
        for (Eigen::Index m : groups[g]) {
          s += std::norm(reference[static_cast<std::size_t>(k)].dot(vecs.col(m)));
        }
        cands.push_back({std::sqrt(s), k, g});
      }
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.overlap > b.overlap; });
    std::vector<std::size_t> capacity(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) capacity[g] = groups[g].size();
    std::vector<long> curve_group(static_cast<std::size_t>(dim), -1);
    std::vector<double> curve_overlap(static_cast<std::size_t>(dim), 0.0);
    for (const auto& c : cands) {
      auto& cg = curve_group[static_cast<std::size_t>(c.curve)];
      if (cg >= 0 || capacity[c.group] == 0) continue;
      cg = static_cast<long>(c.group);
      curve_overlap[static_cast<std::size_t>(c.curve)] = c.overlap;
      --capacity[c.group];
    }

    // Within a group, order curves by linearly extrapolated energy.
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<Eigen::Index> members;
      for (Eigen::Index k = 0; k < dim; ++k) {
        if (curve_group[static_cast<std::size_t>(k)] == static_cast<long>(g)) members.push_back(k);
      }
      auto predicted = [&](Eigen::Index k) {
        const auto& s = scan.curves[static_cast<std::size_t>(k)].samples;
        if (s.size() < 2) return s.back().energy;
        const auto& p1 = s[s.size() - 1];
        const auto& p0 = s[s.size() - 2];
        return p1.energy + (p1.energy - p0.energy) * (tau - p1.tau) / (p1.tau - p0.tau);
      };
      std::stable_sort(members.begin(), members.end(),
                       [&](Eigen::Index a, Eigen::Index b) { return predicted(a) < predicted(b); });
      const bool degenerate = groups[g].size() > 1;
      for (std::size_t i = 0; i < members.size(); ++i) {
        const Eigen::Index k = members[i];
        const Eigen::Index m = groups[g][i];
        auto& curve = scan.curves[static_cast<std::size_t>(k)];
        const bool previous_flagged = curve.samples.back().near_crossing;
        if (!degenerate && !previous_flagged &&
            curve_overlap[static_cast<std::size_t>(k)] < options.overlap_threshold) {
          throw TrackingError("eigenvector overlap " +
                                  std::to_string(curve_overlap[static_cast<std::size_t>(k)]) +
                                  " below threshold on branch " + std::to_string(k),
                              tau);
        }
        curve.samples.push_back({tau, vals(m), vecs.col(m), degenerate});
        if (!degenerate) reference[static_cast<std::size_t>(k)] = vecs.col(m);
        if (degenerate && i == 0) scan.crossings.push_back(tau);
      }
    }

    // Crossings between grid points show up as a change of energy order.
    for (Eigen::Index k = 0; k < dim; ++k) {
      for (Eigen::Index l = k + 1; l < dim; ++l) {
        auto& sk = scan.curves[static_cast<std::size_t>(k)].samples;
        auto& sl = scan.curves[static_cast<std::size_t>(l)].samples;
        const double d_now = sk.back().energy - sl.back().energy;
        const double d_prev = sk[sk.size() - 2].energy - sl[sl.size() - 2].energy;
        if (sk.back().near_crossing || sk[sk.size() - 2].near_crossing) continue;
        if ((d_now > 0.0) != (d_prev > 0.0) && d_now != 0.0 && d_prev != 0.0) {
          const double t0 = sk[sk.size() - 2].tau;
          scan.crossings.push_back(t0 + (tau - t0) * d_prev / (d_prev - d_now));
          sk.back().near_crossing = true;
          sl.back().near_crossing = true;
        }
      }
    }
  }
  std::sort(scan.crossings.begin(), scan.crossings.end());
  return scan;
}

GapMinimum minimum_gap(const ModelConfig& config, int sector, int lower, double lo, double hi,
                       std::size_t scan_points) {
  const OperatorSet ops = build_operators(HilbertSpace(config.cutoff));
  SectorBlock block(config, ops, sector);
  if (lower < 0 || lower + 1 >= static_cast<int>(block.basis.size())) {
    throw std::invalid_argument("minimum_gap: branch index out of range");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es;
  auto gap = [&](double tau) {
    es.compute(block.at(tau), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(lower + 1) - es.eigenvalues()(lower);
  };
  const auto grid = linspace(lo, hi, scan_points);
  std::size_t best = 0;
  double best_gap = gap(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double g = gap(grid[i]);
    if (g < best_gap) {
      best_gap = g;
      best = i;
    }
  }
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = gap(c), fd = gap(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = gap(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = gap(d);
    }
  }
  const double tau = 0.5 * (a + b);
  return {tau, gap(tau)};
}

double chirp_phase_shift(const ModelConfig& config, int n, const QuadratureOptions& q) {
  if (n < -1) throw std::invalid_argument("chirp_phase_shift: sector label must be >= -1");
  const double weight = 2.0 * std::sqrt(static_cast<double>(n + 2));
  if (config.chirps.delta0 == 0.0) return 0.0;
  auto integrand = [&](double tau) {
    const double d1 = detuning(tau, 1, config.chirps);
    const double e1 = std::abs(coupling(tau, 1, config.pulses));
    return radical_excess(d1, weight * e1);
  };
  const double t0 = config.chirps.tau0;
  const double w = 6.0 * config.chirps.sigma_s;
  const double value =
      integrate_checked(integrand, window_breaks(config, {-t0 - w, -t0, -t0 + w}), q,
                        "chirp_phase_shift");
  return kTimeJacobian * value;
}

double resonant_phase(const ModelConfig& config, int n, const QuadratureOptions& q) {
  if (n < -1) throw std::invalid_argument("resonant_phase: sector label must be >= -1");
  const int sector = n + 2;
  require_complete_sector(config, sector);
  ModelConfig resonant = config;
  resonant.chirps.delta0 = 0.0;
  const OperatorSet ops = build_operators(HilbertSpace(config.cutoff));
  SectorBlock block(resonant, ops, sector);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es;
  auto top = [&](double tau) {
    es.compute(block.at(tau), Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    const Eigen::Index last = v.size() - 1;
    if (last > 0) {
      const double scale = std::max(std::abs(v(last)), std::abs(v(0)));
      if (scale > 1e-8 && v(last) - v(last - 1) < 1e-8 * scale) {
        throw TrackingError("outermost adiabatic branch is degenerate", tau);
      }
    }
    return v(last);
  };
  const double d = config.pulses.delta;
  const double value = integrate_checked(top, window_breaks(config, {-d, 0.0, d}), q,
                                         "resonant_phase");
  return kTimeJacobian * value;
}

PhasePair adiabatic_phases(const ModelConfig& config, int n, const QuadratureOptions& q) {
  const double phi = resonant_phase(config, n, q);
  const double shift = chirp_phase_shift(config, n, q);
  return {phi, shift, phi + shift};
}

ComplexMatrix ideal_map_matrix(const HilbertSpace& space, const std::function<double(int)>& phase) {
  const Eigen::Index dim = space.dim();
  const int cutoff = space.cutoff();
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  using L = Level;
  for (int n = -1; n + 2 <= cutoff; ++n) {
    const double phi = phase(n);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const Eigen::Index ge = space.index({n + 1, L::Ground, L::Excited});
    const Eigen::Index eg = space.index({n + 1, L::Excited, L::Ground});
    const Eigen::Index gg = space.index({n + 2, L::Ground, L::Ground});
    for (Eigen::Index i : {ge, eg, gg}) u.col(i).setZero();
    u(eg, ge) = -1.0;
    u(ge, eg) = c;
    u(gg, eg) = -kI * s;
    u(ge, gg) = -kI * s;
    u(gg, gg) = c;
  }
  return u;
}

StateVector ideal_map(const StateVector& state, const std::function<double(int)>& phase) {
  const HilbertSpace& space = state.space();
  const int top = space.cutoff();
  for (Level s : {Level::Excited, Level::Ground}) {
    const Level other = s == Level::Excited ? Level::Ground : Level::Excited;
    if (std::abs(state[{top, s, other}]) > 1e-14) {
      throw std::invalid_argument("ideal_map: state has support on " +
                                  to_string(BasisState{top, s, other}) +
                                  ", whose partner lies above the cutoff");
    }
  }
  return StateVector(space, ideal_map_matrix(space, phase) * state.amplitudes());
}

StateVector ideal_map(const StateVector& state, double phi_tilde) {
  return ideal_map(state, [phi_tilde](int) { return phi_tilde; });
}

double predicted_fidelity(double phi_tilde) { return std::abs(3.0 + std::cos(phi_tilde)) / 4.0; }

ChirpSolution solve_chirp_amplitude(const ModelConfig& config, int m, double delta0_max) {
  if (m < 1) throw std::invalid_argument("solve_chirp_amplitude: m must be >= 1");
  if (delta0_max <= 0.0) delta0_max = 5.0 * std::max(std::abs(config.pulses.g1), 1.0);
  const double phi = resonant_phase(config, -1);
  const double target = kTwoPi * m;
  auto residual = [&](double d0) {
    ModelConfig c = config;
    c.chirps.delta0 = d0;
    return phi + chirp_phase_shift(c, -1) - target;
  };
  const double f0 = phi - target;
  if (std::abs(f0) <= 1e-6) return {0.0, phi, f0, m};
  const double fmax = residual(delta0_max);
  if (f0 > 0.0 || fmax < 0.0) {
    throw NoRootError("solve_chirp_amplitude: target 2*pi*" + std::to_string(m) + " = " +
                          std::to_string(target) + " outside attainable phase range [" +
                          std::to_string(phi) + ", " + std::to_string(fmax + target) + "]",
                      phi, fmax + target);
  }
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(
      residual, 0.0, delta0_max, f0, fmax, boost::math::tools::eps_tolerance<double>(50), iters);
  double root = 0.5 * (lo + hi);
  double r = residual(root);
  if (std::abs(r) > 1e-6) {
    // Bisect the remaining bracket until the phase residual is met.
    for (int i = 0; i < 200 && std::abs(r) > 1e-6; ++i) {
      if (r > 0.0) hi = root;
      else lo = root;
      root = 0.5 * (lo + hi);
      r = residual(root);
    }
  }
  return {root, r + target, r, m};
}

ChirpSolution smallest_chirp_amplitude(const ModelConfig& config, double delta0_max) {
  const double phi = resonant_phase(config, -1);
  int m = static_cast<int>(std::ceil(phi / kTwoPi));
  if (std::abs(phi - kTwoPi * (m - 1)) <= 1e-6) --m;
  return solve_chirp_amplitude(config, std::max(m, 1), delta0_max);
}

}  // namespace tcsim
