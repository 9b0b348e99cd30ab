#pragma once

// Dormand-Prince 5(4) with PI step-size control (Hairer, Norsett & Wanner,
// Solving ODEs I, section II.4). Works for any Eigen dense state.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "tcsim/errors.hpp"

namespace tcsim::ode {

struct StepControl {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_max = 0.05;
  double h_min = 1e-12;
  std::size_t max_steps = 2'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_calls = 0;
};

namespace detail {

template <class State>
double error_norm(const State& err, const State& y0, const State& y1, double atol,
                  double rtol) {
  const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  const double sum = (err.cwiseAbs().array() / scale).square().sum();
  return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace detail

/// Integrates y' = rhs(t, y, dy) from t0 to t1 in place. `observe(t, y)` is
/// called at t0 and after every accepted step. Throws IntegrationError when
/// the step budget is exhausted or the step underflows h_min.
template <class State, class Rhs, class Observer>
Stats integrate(Rhs&& rhs, State& y, double t0, double t1, const StepControl& ctl,
                Observer&& observe) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  constexpr double safety = 0.9;
  constexpr double beta = 0.04;
  constexpr double expo = 0.2 - beta * 0.75;
  constexpr double fac_min = 0.2;   // largest shrink 1/5
  constexpr double fac_max = 10.0;  // largest growth

  Stats stats;
  observe(t0, static_cast<const State&>(y));
  if (t1 <= t0) return stats;

  State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y;
  State ytmp = y, ynew = y, err = y;

  rhs(t0, y, k1);
  ++stats.rhs_calls;

  double t = t0;
  double h = std::min({ctl.h_init, ctl.h_max, t1 - t0});
  double err_old = 1e-4;
  bool last_rejected = false;

  while (t < t1) {
    if (stats.accepted + stats.rejected >= ctl.max_steps) {
      throw IntegrationError("step budget exhausted", t);
    }
    if (h < ctl.h_min) throw IntegrationError("step size underflow", t);
    bool final_step = false;
    if (t + h >= t1) {
      h = t1 - t;
      final_step = true;
    }

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    rhs(t + h, ynew, k7);
    stats.rhs_calls += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = detail::error_norm(err, y, ynew, ctl.atol, ctl.rtol);
    if (!std::isfinite(en)) throw IntegrationError("non-finite error estimate", t);

    const double fac11 = std::pow(std::max(en, 1e-300), expo);
    if (en <= 1.0) {
      double fac = fac11 / std::pow(err_old, beta) / safety;
      fac = std::clamp(fac, 1.0 / fac_max, 1.0 / fac_min);
      double h_next = h / fac;
      if (last_rejected) h_next = std::min(h_next, h);
      err_old = std::max(en, 1e-4);
      t = final_step ? t1 : t + h;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;
      last_rejected = false;
      observe(t, static_cast<const State&>(y));
      h = std::min(h_next, ctl.h_max);
    } else {
      h = h / std::min(1.0 / fac_min, fac11 / safety);
      ++stats.rejected;
      last_rejected = true;
    }
  }
  return stats;
}

template <class State, class Rhs>
Stats integrate(Rhs&& rhs, State& y, double t0, double t1, const StepControl& ctl) {
  return integrate(std::forward<Rhs>(rhs), y, t0, t1, ctl, [](double, const State&) {});
}

}  // namespace tcsim::ode
