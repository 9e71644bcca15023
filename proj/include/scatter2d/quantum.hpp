#pragma once

// Exact partial-wave layer. The reduced radial function R^_m = sqrt(r) R_m
// obeys R^'' + F R^ = 0 with F = k^2 - U(r) - (m^2 - 1/4)/r^2. It is
// integrated outward with Numerov's method and matched to
// sqrt(r) [cos(delta) J_m(kr) - sin(delta) Y_m(kr)] at two radii a quarter
// wavelength apart.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "scatter2d/error.hpp"
#include "scatter2d/numerics.hpp"
#include "scatter2d/potential.hpp"
#include "scatter2d/specfun.hpp"

namespace scatter2d {

enum class PhaseMethod { Quantum, WKB, Eikonal };
enum class DcsMethod { Quantum, Classical, SPAInterference, Airy };

inline const char* to_string(PhaseMethod m) {
  switch (m) {
    case PhaseMethod::Quantum: return "quantum";
    case PhaseMethod::WKB: return "wkb";
    case PhaseMethod::Eikonal: return "eikonal";
  }
  return "?";
}

inline const char* to_string(DcsMethod m) {
  switch (m) {
    case DcsMethod::Quantum: return "quantum";
    case DcsMethod::Classical: return "classical";
    case DcsMethod::SPAInterference: return "spa";
    case DcsMethod::Airy: return "airy";
  }
  return "?";
}

struct ScatteringSetup {
  double k = 1.0;
  int m_max = 0;
  double r_match = 1.0;
  double grid_step = 1e-3;

  /// Checks k r_match >= m_max + 10 and at least 20 points per wavelength.
  void validate() const {
    if (!(k > 0.0)) throw Error(ErrorKind::InvalidInput, "k must be positive");
    if (m_max < 0) throw Error(ErrorKind::InvalidInput, "m_max must be nonnegative");
    if (!(grid_step > 0.0)) throw Error(ErrorKind::InvalidInput, "grid_step must be positive");
    if (k * r_match < m_max + 10.0)
      throw Error(ErrorKind::InvalidInput, "k*r_match must be at least m_max + 10 (asymptotic matching)");
    if (grid_step > (2.0 * std::numbers::pi / k) / 20.0)
      throw Error(ErrorKind::NoConvergence,
                  "grid_step " + std::to_string(grid_step) + " exceeds a twentieth of the wavelength " +
                      std::to_string(2.0 * std::numbers::pi / k));
  }
};

/// Default m_max: ceil(k r_range) + 15.
inline int default_m_max(const RadialPotential& pot, double k) {
  return static_cast<int>(std::ceil(k * pot.r_range())) + 15;
}

/// Setup with the default partial-wave cutoff, matching radius and a grid
/// step of 0.01/k (well inside the 20-points-per-wavelength bound; keeps the
/// accumulated Numerov phase error near 1e-9 rad).
inline ScatteringSetup make_setup(const RadialPotential& pot, double k, std::optional<int> m_max = std::nullopt,
                                  std::optional<double> grid_step = std::nullopt) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidInput, "k must be positive");
  ScatteringSetup s;
  s.k = k;
  s.m_max = m_max.value_or(default_m_max(pot, k));
  s.r_match = std::max(pot.r_range(), (s.m_max + 10.0) / k);
  s.grid_step = grid_step.value_or(0.01 / k);
  s.validate();
  return s;
}

struct PhaseShiftTable {
  double k = 1.0;
  std::vector<double> deltas;  // index m = 0..m_max
  PhaseMethod method = PhaseMethod::Quantum;

  int m_max() const { return static_cast<int>(deltas.size()) - 1; }
};

struct AngularDistribution {
  std::vector<double> thetas;
  std::vector<double> values;
  DcsMethod method = DcsMethod::Quantum;
};

namespace detail {

struct NumerovGrid {
  double h;
  int n_start;  // first grid index r = n_start * h
  int n_end;    // last grid index (inclusive)
};

// Orders up to this one get their starting values from an RK4 integration of
// the smooth factor w = R^ / r^{m+1/2}; higher orders use a Frobenius start.
inline constexpr int kSmoothStartMaxOrder = 10;

// First grid index of the Numerov recurrence. Numerov's relative local error
// on the r^{m+1/2} behaviour at index n is ~n^-6 whatever the step, and for
// m = 0 it feeds the irregular solution almost undamped, so low orders start
// between 20 and 100 steps out (k r_start ~ 1). High orders start at 2m so
// that h^2 (m^2 - 1/4) / r^2 <= 1/4.
inline int numerov_start_index(int m, double k, double h) {
  if (m > kSmoothStartMaxOrder) return 2 * m;
  return std::clamp(static_cast<int>(1.0 / (k * h)), 20, 100);
}

// Three-term Frobenius factor r^{-(m+1/2)} R^ for a locally constant
// q^2 = k^2 - U.
inline double frobenius_start(int m, double q2, double r) {
  const double a1 = -q2 / (4.0 * (m + 1.0));
  const double a2 = q2 * q2 / (32.0 * (m + 1.0) * (m + 2.0));
  const double r2 = r * r;
  return 1.0 + a1 * r2 + a2 * r2 * r2;
}

// w'' + (2m+1)/r w' + (k^2 - U) w = 0 with w(0) = 1, w'(0) = 0, integrated by
// RK4 in t = ln r (stiffness 2m+1 is then constant). Returns w(r0), w(r1).
inline std::pair<double, double> smooth_start(const RadialPotential& pot, double k, int m, double r0, double r1) {
  constexpr double dt_max = 0.005;
  const double c = 2.0 * m + 1.0;
  auto rhs = [&](double t, double w, double v, double& dw, double& dv) {
    const double r = std::exp(t);
    dw = r * v;
    dv = -c * v - r * (k * k - pot(r)) * w;
  };
  double t = std::log(r0 * 1e-8);
  double w = 1.0, v = 0.0;
  auto advance = [&](double t_end) {
    const int steps = std::max(1, static_cast<int>(std::ceil((t_end - t) / dt_max)));
    const double dt = (t_end - t) / steps;
    for (int i = 0; i < steps; ++i) {
      double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v;
      rhs(t, w, v, k1w, k1v);
      rhs(t + 0.5 * dt, w + 0.5 * dt * k1w, v + 0.5 * dt * k1v, k2w, k2v);
      rhs(t + 0.5 * dt, w + 0.5 * dt * k2w, v + 0.5 * dt * k2v, k3w, k3v);
      rhs(t + dt, w + dt * k3w, v + dt * k3v, k4w, k4v);
      w += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
      v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      t += dt;
    }
  };
  advance(std::log(r0));
  const double w0 = w;
  advance(std::log(r1));
  return {w0, w};
}

/// Runs Numerov from the origin region to index n_end. `visit(n, y)` is called
/// for every index with the current (arbitrarily scaled) value; returning a
/// rescale factor lets callers keep stored values consistent.
template <class Visitor>
void numerov_integrate(const RadialPotential& pot, double k, int m, const NumerovGrid& grid, Visitor&& visit) {
  const double h = grid.h;
  const double h2 = h * h / 12.0;
  const double centrifugal = m * static_cast<double>(m) - 0.25;
  auto F = [&](double r) { return k * k - pot(r) - centrifugal / (r * r); };

  const int n0 = grid.n_start;
  const double r0 = n0 * h, r1 = (n0 + 1) * h;
  double w0, w1;
  if (m <= kSmoothStartMaxOrder) {
    std::tie(w0, w1) = smooth_start(pot, k, m, r0, r1);
  } else {
    const double q2 = k * k - pot(r0);
    w0 = frobenius_start(m, q2, r0);
    w1 = frobenius_start(m, q2, r1);
  }
  // only the ratio matters, so the first value is 1
  const double ratio = std::pow(r1 / r0, m + 0.5) * w1 / w0;
  double y_prev = 1.0, y_curr = ratio;
  double f_prev = F(r0), f_curr = F(r1);
  visit(n0, y_prev, 1.0);
  visit(n0 + 1, y_curr, 1.0);
  for (int n = n0 + 1; n < grid.n_end; ++n) {
    const double f_next = F((n + 1) * h);
    const double y_next =
        (2.0 * y_curr * (1.0 - 5.0 * h2 * f_curr) - y_prev * (1.0 + h2 * f_prev)) / (1.0 + h2 * f_next);
    if (!std::isfinite(y_next))
      throw Error(ErrorKind::NoConvergence, "Numerov integration overflowed at r=" + std::to_string((n + 1) * h));
    y_prev = y_curr;
    y_curr = y_next;
    f_prev = f_curr;
    f_curr = f_next;
    double scale = 1.0;
    if (std::abs(y_curr) > 1e150) {
      scale = 1e-150;
      y_prev *= scale;
      y_curr *= scale;
    }
    visit(n + 1, y_curr, scale);
  }
}

struct MatchPoints {
  int n1, n2;
};

inline MatchPoints match_points(const ScatteringSetup& s) {
  const int n1 = static_cast<int>(std::ceil(s.r_match / s.grid_step - 1e-9));
  const int quarter = std::max(1, static_cast<int>(std::lround(std::numbers::pi / (2.0 * s.k * s.grid_step))));
  return {n1, n1 + quarter};
}

// tan(delta) = -c2/c1 from R^ = c1 sqrt(r) J_m(kr) + c2 sqrt(r) Y_m(kr) at r1, r2.
inline double match_phase(int m, double k, double r1, double y1, double r2, double y2) {
  const double j1 = specfun::bessel_j(m, k * r1), yy1 = specfun::bessel_y(m, k * r1);
  const double j2 = specfun::bessel_j(m, k * r2), yy2 = specfun::bessel_y(m, k * r2);
  const double s1 = std::sqrt(r1), s2 = std::sqrt(r2);
  const double det = s1 * s2 * (j1 * yy2 - j2 * yy1);
  if (std::abs(j1 * yy2 - j2 * yy1) < 1e-8 * (std::abs(j1 * yy2) + std::abs(j2 * yy1)))
    throw Error(ErrorKind::SingularMatching, "matching determinant vanishes for m=" + std::to_string(m));
  const double c1 = (y1 * s2 * yy2 - y2 * s1 * yy1) / det;
  const double c2 = (s1 * j1 * y2 - s2 * j2 * y1) / det;
  if (c1 == 0.0) return std::numbers::pi / 2.0;
  double delta = std::atan(-c2 / c1);
  if (delta <= -std::numbers::pi / 2.0) delta += std::numbers::pi;
  return delta;
}

}  // namespace detail

/// Principal-value phase shift delta_m in (-pi/2, pi/2] for partial wave m.
inline double radial_phase_shift(const RadialPotential& pot, const ScatteringSetup& setup, int m) {
  setup.validate();
  if (m < 0 || m > setup.m_max)
    throw Error(ErrorKind::InvalidInput, "partial wave m=" + std::to_string(m) + " outside 0..m_max");
  if (setup.r_match < pot.r_range())
    throw Error(ErrorKind::InvalidInput, "r_match must not be inside the potential range");
  const auto [n1, n2] = detail::match_points(setup);
  const detail::NumerovGrid grid{setup.grid_step, detail::numerov_start_index(m, setup.k, setup.grid_step), n2};
  if (grid.n_start + 2 > n1) throw Error(ErrorKind::InvalidInput, "matching radius too close to the origin");
  double y1 = 0.0, y2 = 0.0;
  detail::numerov_integrate(pot, setup.k, m, grid, [&](int n, double y, double scale) {
    y1 *= scale;
    if (n == n1) y1 = y;
    if (n == n2) y2 = y;
  });
  return detail::match_phase(m, setup.k, n1 * setup.grid_step, y1, n2 * setup.grid_step, y2);
}

/// Numerov solution sampled on r = n h for n up to r_end / h; values inside
/// the start radius are zero. Normalization is arbitrary.
struct RadialSolution {
  std::vector<double> r;
  std::vector<double> values;
};

inline RadialSolution radial_solution(const RadialPotential& pot, double k, int m, double grid_step, double r_end) {
  if (!(grid_step > 0.0) || !(r_end > grid_step)) throw Error(ErrorKind::InvalidInput, "bad radial grid");
  const int n_end = static_cast<int>(std::ceil(r_end / grid_step));
  const detail::NumerovGrid grid{grid_step, detail::numerov_start_index(m, k, grid_step), n_end};
  RadialSolution out;
  out.r.resize(n_end + 1);
  out.values.assign(n_end + 1, 0.0);
  for (int n = 0; n <= n_end; ++n) out.r[n] = n * grid_step;
  detail::numerov_integrate(pot, k, m, grid, [&](int n, double y, double scale) {
    if (scale != 1.0)
      for (int i = 0; i < n; ++i) out.values[i] *= scale;
    out.values[n] = y;
  });
  return out;
}

/// All phase shifts 0..m_max, computed as a parallel map over m.
inline PhaseShiftTable quantum_phase_shifts(const RadialPotential& pot, const ScatteringSetup& setup) {
  setup.validate();
  PhaseShiftTable table;
  table.k = setup.k;
  table.method = PhaseMethod::Quantum;
  table.deltas = numerics::parallel_map(static_cast<std::size_t>(setup.m_max + 1), [&](std::size_t m) {
    return radial_phase_shift(pot, setup, static_cast<int>(m));
  });
  return table;
}

inline double neumann_factor(int m) { return m == 0 ? 1.0 : 2.0; }

/// f(k, theta) = sqrt(2/pi) sum_m eps_m cos(m theta) e^{i delta_m} sin(delta_m);
/// dimension length^{1/2}.
inline std::complex<double> amplitude(const PhaseShiftTable& table, double theta) {
  std::complex<double> sum{0.0, 0.0};
  for (int m = 0; m <= table.m_max(); ++m) {
    const double d = table.deltas[m];
    sum += neumann_factor(m) * std::cos(m * theta) * std::polar(std::sin(d), d);
  }
  return std::sqrt(2.0 / std::numbers::pi) * sum;
}

/// |f|^2 / k on a strictly increasing angle grid inside [0, pi].
inline AngularDistribution differential_cross_section(const PhaseShiftTable& table, const std::vector<double>& thetas) {
  if (!numerics::strictly_increasing(thetas))
    throw Error(ErrorKind::InvalidInput, "angle grid must be strictly increasing");
  if (!thetas.empty() && (thetas.front() < 0.0 || thetas.back() > std::numbers::pi))
    throw Error(ErrorKind::InvalidInput, "angles must lie in [0, pi]");
  AngularDistribution out;
  out.thetas = thetas;
  out.method = DcsMethod::Quantum;
  out.values.reserve(thetas.size());
  for (double t : thetas) out.values.push_back(std::norm(amplitude(table, t)) / table.k);
  return out;
}

/// sigma = (4/k) sum_m eps_m sin^2(delta_m). The 1/k makes sigma the angular
/// integral of |f|^2/k over [0, 2 pi].
inline double total_cross_section(const PhaseShiftTable& table) {
  double sum = 0.0;
  for (int m = 0; m <= table.m_max(); ++m) {
    const double s = std::sin(table.deltas[m]);
    sum += neumann_factor(m) * s * s;
  }
  return 4.0 * sum / table.k;
}

}  // namespace scatter2d
