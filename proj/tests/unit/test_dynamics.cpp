#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tcsim/dynamics.hpp"
#include "tcsim/errors.hpp"
#include "tcsim/metrics.hpp"

using namespace tcsim;

namespace {

StateVector random_state(const HilbertSpace& space, std::mt19937& rng,
                         const std::vector<Eigen::Index>& support) {
  std::normal_distribution<double> d;
  ComplexVector v = ComplexVector::Zero(space.dim());
  for (auto i : support) v(i) = {d(rng), d(rng)};
  StateVector psi(space, v);
  psi.normalize();
  return psi;
}

std::vector<Eigen::Index> all_indices(const HilbertSpace& space) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(space.dim()));
  for (Eigen::Index i = 0; i < space.dim(); ++i) idx[static_cast<std::size_t>(i)] = i;
  return idx;
}

ModelConfig free_config() {
  ModelConfig cfg = symmetric_config(0.0, 1.25, 0.0, 2.0, 0.2);
  return cfg;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("single-atom pulse area") {
    for (double g1 : {0.3, 0.7, 1.9}) {
      ModelConfig cfg = symmetric_config(g1, 1.25, 0.0, 2.0, 0.2);
      cfg.pulses.g2 = 0.0;
      const HilbertSpace space(cfg.cutoff);
      const auto psi0 = StateVector::basis(space, {0, Level::Excited, Level::Ground});
      const auto psi = evolve_state(psi0, cfg).final();
      const double area = 2.0 * std::sqrt(std::numbers::pi) * g1;
      const double pe = std::norm(psi[{0, Level::Excited, Level::Ground}]);
      CHECK(pe == doctest::Approx(std::cos(area) * std::cos(area)).epsilon(1e-7));
      const double pc = std::norm(psi[{1, Level::Ground, Level::Ground}]);
      CHECK(pc == doctest::Approx(std::sin(area) * std::sin(area)).epsilon(1e-7));
    }
  }

  TEST_CASE("vanishing Hamiltonian leaves the state alone") {
    const ModelConfig cfg = free_config();
    const HilbertSpace space(cfg.cutoff);
    const auto psi0 = product_plus_state(space);
    const auto traj = evolve_state(psi0, cfg);
    CHECK(traj.times.size() == 2);
    CHECK(traj.final_time() == doctest::Approx(cfg.window.end));
    CHECK((traj.final().amplitudes() - psi0.amplitudes()).norm() < 1e-12);
  }

  TEST_CASE("free decay of the cavity and of one atom") {
    ModelConfig cfg = free_config();
    cfg.gamma_c = 0.05;
    cfg.gamma_s = 0.02;
    const double span = cfg.window.end - cfg.window.start;
    const HilbertSpace space(cfg.cutoff);

    const DensityMatrix photon(StateVector::basis(space, {1, Level::Ground, Level::Ground}));
    const auto rho = evolve_density(photon, cfg).final();
    CHECK(mean_photon(rho) == doctest::Approx(std::exp(-2.0 * cfg.gamma_c * span)).epsilon(1e-7));
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-9));

    const DensityMatrix atom(StateVector::basis(space, {0, Level::Excited, Level::Ground}));
    const auto rho_a = evolve_density(atom, cfg).final();
    const auto idx = space.index({0, Level::Excited, Level::Ground});
    CHECK(rho_a.entries()(idx, idx).real() ==
          doctest::Approx(std::exp(-2.0 * cfg.gamma_s * span)).epsilon(1e-7));
  }

  TEST_CASE("closed master equation reproduces the pure trajectory") {
    const ModelConfig cfg = symmetric_config(30.0, 1.25, 13.2, 2.0, 0.2);
    const HilbertSpace space(cfg.cutoff);
    const auto psi0 = product_plus_state(space);
    const auto psi = evolve_state(psi0, cfg).final();
    const auto rho = evolve_density(DensityMatrix(psi0), cfg).final();
    CHECK((rho.entries() - DensityMatrix(psi).entries()).cwiseAbs().maxCoeff() < 1e-7);
  }

  TEST_CASE("random states stay normalized and inside their sector") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
      ModelConfig cfg = symmetric_config(10.0 + 25.0 * u(rng), 1.25, 20.0 * u(rng), 2.0, 0.2);
      cfg.pulses.g2 *= 0.5 + u(rng);
      const HilbertSpace space(cfg.cutoff);
      const auto full = random_state(space, rng, all_indices(space));
      CHECK(std::abs(evolve_state(full, cfg).final().norm() - 1.0) < 1e-8);

      const int sector = 1 + trial % 3;
      const auto idx = sector_indices(space, sector);
      const auto local = evolve_state(random_state(space, rng, idx), cfg).final();
      double outside = 0.0;
      for (Eigen::Index i = 0; i < space.dim(); ++i) {
        if (space.state(i).excitations() != sector) outside += std::norm(local.amplitudes()(i));
      }
      CHECK(outside < 1e-10);
    }
  }

  TEST_CASE("open evolution keeps a valid density matrix") {
    std::mt19937 rng(99);
    ModelConfig cfg = symmetric_config(30.0, 1.25, 13.2, 2.0, 0.2);
    cfg.gamma_c = 0.01;
    cfg.gamma_s = 0.03;
    const HilbertSpace space(cfg.cutoff);
    for (int trial = 0; trial < 3; ++trial) {
      const DensityMatrix rho0(random_state(space, rng, all_indices(space)));
      EvolveOptions opts;
      opts.stride = 500;
      const auto traj = evolve_density(rho0, cfg, opts);
      CHECK(traj.states.size() > 2);
      for (const auto& rho : traj.states) {
        CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
        CHECK((rho.entries() - rho.entries().adjoint()).norm() < 1e-8);
        CHECK(rho.min_eigenvalue() > -1e-8);
      }
    }
  }

  TEST_CASE("sector propagators are unitary") {
    ModelConfig cfg = symmetric_config(30.0, 1.25, 13.2, 2.0, 0.2);
    cfg.tol = 1e-11;
    const HilbertSpace space(cfg.cutoff);
    for (int sector : {1, 2, 3}) {
      const auto u = extract_propagator(cfg, sector);
      const auto k = u.matrix.rows();
      CHECK((u.matrix.adjoint() * u.matrix - ComplexMatrix::Identity(k, k)).norm() < 1e-8);
    }
    const auto u1 = extract_propagator(cfg, 1);
    const BasisState from{0, Level::Excited, Level::Ground};
    const auto psi = evolve_state(StateVector::basis(space, from), cfg).final();
    CHECK(std::abs(u1.element(space, from, from) - psi[from]) < 1e-12);
    CHECK_THROWS_AS((void)u1.element(space, {0, Level::Ground, Level::Ground}, from),
                    std::out_of_range);
    CHECK_THROWS_AS((void)extract_propagator(cfg, 9), std::invalid_argument);
  }

  TEST_CASE("raising the cutoff does not move the fidelity") {
    ModelConfig cfg = symmetric_config(30.0, 1.25, 13.2, 2.0, 0.2);
    const double f3 = fidelity(evolve_state(product_plus_state(HilbertSpace(3)), cfg).final(),
                               entangled_target(HilbertSpace(3)));
    cfg.cutoff = 6;
    const double f6 = fidelity(evolve_state(product_plus_state(HilbertSpace(6)), cfg).final(),
                               entangled_target(HilbertSpace(6)));
    CHECK(std::abs(f3 - f6) < 1e-8);
  }

  TEST_CASE("argument errors") {
    ModelConfig cfg = symmetric_config(30.0, 1.25, 0.0, 2.0, 0.2);
    const HilbertSpace space(cfg.cutoff);
    StateVector unnormalized(space, 2.0 * product_plus_state(space).amplitudes());
    CHECK_THROWS_AS((void)evolve_state(unnormalized, cfg), std::invalid_argument);
    CHECK_THROWS_AS((void)evolve_state(product_plus_state(HilbertSpace(2)), cfg),
                    std::invalid_argument);
    cfg.gamma_c = 0.01;
    CHECK_THROWS_AS((void)evolve_state(product_plus_state(space), cfg), std::invalid_argument);
    CHECK_THROWS_AS((void)extract_propagator(cfg, 1), std::invalid_argument);
  }

  TEST_CASE("step budget exhaustion raises IntegrationError") {
    const ModelConfig cfg = symmetric_config(30.0, 1.25, 13.2, 2.0, 0.2);
    EvolveOptions opts;
    opts.max_steps = 20;
    try {
      (void)evolve_state(product_plus_state(HilbertSpace(cfg.cutoff)), cfg, opts);
      FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
      CHECK(e.last_tau() > cfg.window.start);
      CHECK(e.last_tau() < cfg.window.end);
    }
  }

  TEST_CASE("stride controls recorded samples") {
    const ModelConfig cfg = symmetric_config(30.0, 1.25, 0.0, 2.0, 0.2);
    ode::Stats stats;
    EvolveOptions opts;
    opts.stride = 1;
    opts.stats = &stats;
    const auto traj = evolve_state(product_plus_state(HilbertSpace(cfg.cutoff)), cfg, opts);
    CHECK(traj.times.size() == stats.accepted + 1);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  }
}
