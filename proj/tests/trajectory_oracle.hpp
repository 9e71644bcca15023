#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "scatter2d/potential.hpp"

namespace oracle {

// Direct Hamiltonian integration of H = p^2 + U(r): starts at x = -x0, y = b
// with momentum (k, 0) and returns the unwrapped final momentum angle.
inline double trajectory_deflection(const scatter2d::RadialPotential& pot, double k, double b, double x0 = 30.0) {
  using State = std::array<double, 4>;
  namespace ode = boost::numeric::odeint;
  auto rhs = [&](const State& s, State& ds, double) {
    const double r = std::hypot(s[0], s[1]);
    const double du = r > 0.0 ? pot.derivative(r) / r : 0.0;
    ds[0] = 2.0 * s[2];
    ds[1] = 2.0 * s[3];
    ds[2] = -du * s[0];
    ds[3] = -du * s[1];
  };
  State s{-x0, b, k, 0.0};
  // capped step so the free-flight stretch cannot jump over the potential
  const double max_dt = 0.01 / k;
  auto stepper = ode::make_dense_output(1e-12, 1e-12, max_dt, ode::runge_kutta_dopri5<State>());
  stepper.initialize(s, 0.0, 1e-3 / k);
  double angle = 0.0;
  double prev = 0.0;
  const double t_max = 200.0 * x0 / k;
  while (stepper.current_time() < t_max) {
    stepper.do_step(rhs);
    const State& c = stepper.current_state();
    const double a = std::atan2(c[3], c[2]);
    double d = a - prev;
    if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    if (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
    angle += d;
    prev = a;
    const double r = std::hypot(c[0], c[1]);
    if (r > x0 && c[0] * c[2] + c[1] * c[3] > 0.0) break;
  }
  return angle;
}

}  // namespace oracle
