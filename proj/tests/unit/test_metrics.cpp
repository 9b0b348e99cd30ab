#include <doctest.h>

#include <cmath>
#include <random>

#include "tcsim/metrics.hpp"

using namespace tcsim;

namespace {

Eigen::Vector4cd pair_state(Complex gg, Complex ge, Complex eg, Complex ee) {
  Eigen::Vector4cd v;
  v << gg, ge, eg, ee;
  return v.normalized();
}

StateVector on_space(const HilbertSpace& space,
                     std::initializer_list<std::pair<BasisState, Complex>> terms) {
  ComplexVector v = ComplexVector::Zero(space.dim());
  for (const auto& [b, c] : terms) v(space.index(b)) = c;
  StateVector psi(space, v);
  psi.normalize();
  return psi;
}

constexpr Level g = Level::Ground;
constexpr Level e = Level::Excited;

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("Wootters concurrence oracles") {
    CHECK(wootters_concurrence(TwoQubitDensity::from_pure(pair_state(0, 1, 1, 0))) ==
          doctest::Approx(1.0));
    CHECK(wootters_concurrence(TwoQubitDensity::from_pure(pair_state(1, 0, 0, 1))) ==
          doctest::Approx(1.0));
    CHECK(wootters_concurrence(TwoQubitDensity::from_pure(pair_state(1, 1, 1, 1))) ==
          doctest::Approx(0.0));
    CHECK(wootters_concurrence(TwoQubitDensity(ComplexMatrix::Identity(4, 4) / 4.0)) ==
          doctest::Approx(0.0));

    const Eigen::Vector4cd bell = pair_state(0, 1, -1, 0);
    for (double p : {0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
      const ComplexMatrix werner = p * bell * bell.adjoint() +
                                   (1.0 - p) / 4.0 * ComplexMatrix::Identity(4, 4);
      CHECK(wootters_concurrence(TwoQubitDensity(werner)) ==
            doctest::Approx(std::max(0.0, (3.0 * p - 1.0) / 2.0)));
    }
  }

  TEST_CASE("pure-state concurrence equals 2|ad - bc|") {
    std::mt19937 rng(5);
    std::normal_distribution<double> d;
    for (int i = 0; i < 20; ++i) {
      const Eigen::Vector4cd v =
          pair_state({d(rng), d(rng)}, {d(rng), d(rng)}, {d(rng), d(rng)}, {d(rng), d(rng)});
      const double expected = 2.0 * std::abs(v(0) * v(3) - v(1) * v(2));
      CHECK(wootters_concurrence(TwoQubitDensity::from_pure(v)) ==
            doctest::Approx(expected).epsilon(1e-7));
    }
  }

  TEST_CASE("two-qubit density validation") {
    ComplexMatrix m = ComplexMatrix::Identity(4, 4) / 4.0;
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(TwoQubitDensity{m}, std::invalid_argument);
    CHECK_THROWS_AS(TwoQubitDensity{ComplexMatrix::Identity(4, 4)}, std::invalid_argument);
    CHECK_THROWS_AS(TwoQubitDensity{ComplexMatrix::Identity(3, 3) / 3.0}, std::invalid_argument);
    ComplexMatrix neg = ComplexMatrix::Zero(4, 4);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(TwoQubitDensity{neg}, std::invalid_argument);
  }

  TEST_CASE("three-party concurrence oracles") {
    const HilbertSpace space(2);
    CHECK(concurrence_c3(product_plus_state(space)) == doctest::Approx(0.0).epsilon(1e-7));
    const auto atom_bell = on_space(space, {{{0, g, e}, 1.0}, {{0, e, g}, 1.0}});
    CHECK(concurrence_c3(atom_bell) == doctest::Approx(1.0));
    const auto ghz = on_space(space, {{{0, g, g}, 1.0}, {{1, e, e}, 1.0}});
    CHECK(concurrence_c3(ghz) == doctest::Approx(std::sqrt(1.5)));
    const auto w = on_space(space, {{{1, g, g}, 1.0}, {{0, e, g}, 1.0}, {{0, g, e}, 1.0}});
    CHECK(concurrence_c3(w) == doctest::Approx(std::sqrt(4.0 / 3.0)));
  }

  TEST_CASE("fidelity conventions") {
    const HilbertSpace space(3);
    const auto target = entangled_target(space);
    CHECK(fidelity(target, target) == doctest::Approx(1.0));
    CHECK(fidelity(product_plus_state(space), target) == doctest::Approx(0.5));
    StateVector phased(space, Complex(0.0, 1.0) * target.amplitudes());
    CHECK(fidelity(phased, target) == doctest::Approx(1.0));
    CHECK(fidelity(DensityMatrix(target), target) == doctest::Approx(1.0));
    const ComplexMatrix mixed = 0.5 * DensityMatrix(target).entries() +
                                0.5 * DensityMatrix(product_plus_state(space)).entries();
    CHECK(fidelity(DensityMatrix(space, mixed), target) ==
          doctest::Approx(std::sqrt(0.5 + 0.5 * 0.25)));
    CHECK_THROWS_AS((void)fidelity(product_plus_state(HilbertSpace(1)), target),
                    std::invalid_argument);
  }

  TEST_CASE("target is maximally entangled") {
    const HilbertSpace space(3);
    CHECK(atomic_concurrence(entangled_target(space)) == doctest::Approx(1.0));
    CHECK(atomic_concurrence(product_plus_state(space)) == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(atomic_concurrence(DensityMatrix(entangled_target(space))) == doctest::Approx(1.0));
    CHECK(concurrence_c3(entangled_target(space)) == doctest::Approx(1.0));
  }

  TEST_CASE("photon number and factorization") {
    const HilbertSpace space(3);
    const auto mix = on_space(space, {{{0, g, g}, 1.0}, {{2, g, g}, 1.0}, {{3, e, g}, 1.0}});
    CHECK(mean_photon(mix) == doctest::Approx(5.0 / 3.0));
    CHECK(mean_photon(DensityMatrix(mix)) == doctest::Approx(5.0 / 3.0));
    CHECK(factorization_residual(product_plus_state(space)) == doctest::Approx(0.0));
    const auto one = StateVector::basis(space, {1, g, g});
    CHECK(factorization_residual(one) == doctest::Approx(std::sqrt(2.0)));
  }
}
