#pragma once

// Classical layer: turning points of F_cl(r) = k^2 - U(r) - k^2 b^2 / r^2,
// the deflection function
//   Theta(k^2, b) = pi - 2 b k * integral_{r0}^{inf} dr r^-2 F_cl^-1/2,
// classical cross sections built from its branches, and orbiting detection.
//
// F_cl uses the pure centrifugal term k^2 b^2 / r^2 (m = kb, no -1/4), which
// is what makes Theta = 2 d(delta_WKB)/dm hold between layers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "scatter2d/error.hpp"
#include "scatter2d/numerics.hpp"
#include "scatter2d/potential.hpp"

namespace scatter2d {

inline double classical_F(const RadialPotential& pot, double k, double b, double r) {
  return k * k - pot(r) - k * k * b * b / (r * r);
}

inline double classical_F_prime(const RadialPotential& pot, double k, double b, double r) {
  return -pot.derivative(r) + 2.0 * k * k * b * b / (r * r * r);
}

namespace detail {

inline constexpr double kScanRatio = 0.995;
inline constexpr double kScanFloor = 1e-10;

// Radius beyond which U is exactly C/r (or negligible), so F_cl has a closed
// form there.
inline double analytic_region_start(const RadialPotential& pot) {
  return pot.coulomb_tail() != 0.0 ? pot.tail_start() : pot.r_range();
}

// Positive root of k^2 r^2 - C r - k^2 b^2 = 0, the turning point of the
// analytic outer region.
inline double outer_region_root(double k, double b, double C) {
  const double k2 = k * k;
  return (C + std::sqrt(C * C + 4.0 * k2 * k2 * b * b)) / (2.0 * k2);
}

}  // namespace detail

/// Outermost root of F_cl, found by scanning inward on a geometric grid from
/// the edge of the potential, checking sampled local minima of F_cl for hidden
/// dips below zero, and bisecting to machine precision.
/// Throws NoTurningPoint when F_cl > 0 down to 1e-10 of the scan start, and
/// OrbitingDegenerate when the root is a double root of F_cl.
inline double turning_point(const RadialPotential& pot, double k, double b) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidInput, "k must be positive");
  if (!(b >= 0.0)) throw Error(ErrorKind::InvalidInput, "impact parameter must be nonnegative");
  auto F = [&](double r) { return classical_F(pot, k, b, r); };

  const double outer = detail::analytic_region_start(pot);
  const double C = pot.coulomb_tail();
  if (C != 0.0 && b > 0.0) {
    const double closed = detail::outer_region_root(k, b, C);
    if (closed >= outer) return closed;  // U is exactly C/r there
  }

  double r_hi = std::max({outer, b, 1e-300}) * 1.01 + 1e-12;
  for (int i = 0; i < 60 && F(r_hi) <= 0.0; ++i) r_hi *= 2.0;
  if (F(r_hi) <= 0.0) throw Error(ErrorKind::NoConvergence, "F_cl does not become positive at large r");

  const double r_floor = detail::kScanFloor * r_hi;
  double r_prev2 = 0.0, f_prev2 = 0.0;
  double r_prev = r_hi, f_prev = F(r_hi);
  std::optional<std::pair<double, double>> bracket;  // (inside, outside)
  for (double r = r_hi * detail::kScanRatio; r > r_floor; r *= detail::kScanRatio) {
    const double f = F(r);
    if (f <= 0.0) {
      bracket = std::make_pair(r, r_prev);
      break;
    }
    // sampled local minimum: F_cl may dip below zero between samples
    if (r_prev2 > 0.0 && f_prev < f && f_prev < f_prev2) {
      const auto min = numerics::golden_minimize(F, r, r_prev2, 1e-14);
      if (min.value <= 0.0) {
        bracket = std::make_pair(min.x, r_prev2);
        break;
      }
    }
    r_prev2 = r_prev;
    f_prev2 = f_prev;
    r_prev = r;
    f_prev = f;
  }
  if (!bracket) throw Error(ErrorKind::NoTurningPoint, "no classical turning point (orbit falls to the center)");
  const double r0 = F(bracket->first) == 0.0 ? bracket->first : numerics::bisect(F, bracket->first, bracket->second);

  const double slope = classical_F_prime(pot, k, b, r0);
  if (std::abs(slope) * r0 < 1e-10 * k * k)
    throw Error(ErrorKind::OrbitingDegenerate, "turning point is a double root of F_cl (orbiting)");
  return r0;
}

namespace detail {

// F_cl(r0 + x) - F_cl(r0) without cancellation: near r0 the potential
// difference is the integral of U' over [r0, r0 + x] by 8-point
// Gauss-Legendre. r0 is only good to rounding, and the sqrt endpoint would
// turn a 1e-16 root error into 1e-8 in the orbit integrals (worse near
// orbiting, where F'(r0) is small).
class RootShiftedF {
 public:
  RootShiftedF(const RadialPotential& pot, double k, double b, double r0)
      : pot_(pot), kb2_(k * k * b * b), r0_(r0), u0_(pot(r0)) {}

  double operator()(double x) const {
    static const numerics::GaussLegendre rule(8);
    const double r = r0_ + x;
    const double centrifugal = kb2_ * x * (r + r0_) / (r0_ * r0_ * r * r);
    if (x > 0.05 * r0_) return centrifugal - (pot_(r) - u0_);
    double dU = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      dU += rule.weights[i] * pot_.derivative(r0_ + 0.5 * x * (1.0 + rule.nodes[i]));
    return centrifugal - 0.5 * x * dU;
  }

 private:
  const RadialPotential& pot_;
  double kb2_, r0_, u0_;
};

// integral_{r_t}^{inf} dr / (r^2 sqrt(k^2 - C/r - k^2 b^2/r^2)), closed form in v = 1/r.
inline double deflection_tail(double k, double b, double C, double r_t) {
  const double alpha = k * k, beta = C, gamma = k * k * b * b;
  const double D = std::sqrt(beta * beta + 4.0 * alpha * gamma);
  const double hi = std::clamp((2.0 * gamma / r_t + beta) / D, -1.0, 1.0);
  const double lo = std::clamp(beta / D, -1.0, 1.0);
  return (std::asin(hi) - std::asin(lo)) / std::sqrt(gamma);
}

}  // namespace detail

/// Deflection function Theta(k^2, b) in radians (sign-carrying, unbounded).
/// The endpoint singularity is removed by r = r0 + u^2; beyond the potential
/// edge the integral is done in closed form. Odd in b.
inline double deflection(const RadialPotential& pot, double k, double b) {
  if (b < 0.0) return -deflection(pot, k, -b);
  if (b == 0.0) {
    try {
      turning_point(pot, k, 0.0);
      return std::numbers::pi;  // head-on reflection
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NoTurningPoint) return 0.0;  // passes straight through
      throw;
    }
  }
  const double r0 = turning_point(pot, k, b);
  const double C = pot.coulomb_tail();
  const double r_t = std::max(detail::analytic_region_start(pot), 2.0 * r0);
  const detail::RootShiftedF shifted_F(pot, k, b, r0);
  auto integrand = [&](double u) {
    const double x = u * u;
    const double f = shifted_F(x);
    if (f <= 0.0) return 0.0;
    const double r = r0 + x;
    return 2.0 * u / (r * r * std::sqrt(f));
  };
  const auto inner = numerics::integrate(integrand, 0.0, std::sqrt(r_t - r0), 1e-14, 1e-12, 8000);
  // near orbiting the 1/sqrt(F) peak sits on rounding noise in F, so accept
  // the noise floor rather than the requested tolerance
  if (!(inner.error <= 1e-9 * std::abs(inner.value) + 1e-13))
    throw Error(ErrorKind::NoConvergence, "deflection quadrature did not converge (estimated error " +
                                              std::to_string(inner.error) + ")");
  const double tail = detail::deflection_tail(k, b, C, r_t);
  return std::numbers::pi - 2.0 * b * k * (inner.value + tail);
}

/// Sampled deflection function. Per-point failures are recorded as gaps
/// (NaN deflection plus the error kind) instead of aborting the sweep.
struct DeflectionCurve {
  std::shared_ptr<const RadialPotential> potential;
  double k = 1.0;
  std::vector<double> bs;
  std::vector<double> thetas_defl;
  std::vector<double> turning_points;
  std::vector<std::optional<ErrorKind>> errors;

  bool valid(std::size_t i) const { return !errors[i].has_value(); }

  double max_abs_deflection() const {
    double m = 0.0;
    for (std::size_t i = 0; i < bs.size(); ++i)
      if (valid(i)) m = std::max(m, std::abs(thetas_defl[i]));
    return m;
  }
};

inline DeflectionCurve deflection_curve(const RadialPotential& pot, double k, const std::vector<double>& bs) {
  if (!numerics::strictly_increasing(bs)) throw Error(ErrorKind::InvalidInput, "b grid must be strictly increasing");
  if (!bs.empty() && bs.front() < 0.0) throw Error(ErrorKind::InvalidInput, "b grid must be nonnegative");
  DeflectionCurve c;
  c.potential = std::make_shared<const RadialPotential>(pot);
  c.k = k;
  c.bs = bs;
  struct Point {
    double theta = std::numeric_limits<double>::quiet_NaN();
    double r0 = std::numeric_limits<double>::quiet_NaN();
    std::optional<ErrorKind> error;
  };
  const auto points = numerics::parallel_map(bs.size(), [&](std::size_t i) {
    Point p;
    try {
      p.theta = deflection(pot, k, bs[i]);
      try {
        p.r0 = turning_point(pot, k, bs[i]);
      } catch (const Error& e) {
        if (bs[i] != 0.0 || e.kind() != ErrorKind::NoTurningPoint) throw;
        p.r0 = 0.0;
      }
    } catch (const Error& e) {
      p.theta = std::numeric_limits<double>::quiet_NaN();
      p.error = e.kind();
    }
    return p;
  });
  for (const auto& p : points) {
    c.thetas_defl.push_back(p.theta);
    c.turning_points.push_back(p.r0);
    c.errors.push_back(p.error);
  }
  return c;
}

/// Finite-difference step for dTheta/db.
inline double deflection_fd_step(double b) { return 1e-4 * std::max(std::abs(b), 1.0); }

inline double deflection_slope(const RadialPotential& pot, double k, double b) {
  return numerics::derivative([&](double x) { return deflection(pot, k, x); }, b, deflection_fd_step(b));
}

struct ClassicalBranch {
  double b;
  double theta_defl;   // Theta(b), sign-carrying
  double dtheta_db;
};

/// All b on the curve with |Theta(b)| = theta: sign changes of |Theta| - theta
/// between valid neighbouring samples, refined by bisection on the deflection
/// function itself. Roots closer than 1e-9 in b are merged.
inline std::vector<ClassicalBranch> classical_branches(const DeflectionCurve& curve, double theta) {
  std::vector<ClassicalBranch> out;
  const auto& pot = *curve.potential;
  auto g = [&](double b) { return std::abs(deflection(pot, curve.k, b)) - theta; };
  for (std::size_t i = 0; i + 1 < curve.bs.size(); ++i) {
    if (!curve.valid(i) || !curve.valid(i + 1)) continue;
    const double g0 = std::abs(curve.thetas_defl[i]) - theta;
    const double g1 = std::abs(curve.thetas_defl[i + 1]) - theta;
    if (g0 == 0.0 && i > 0) continue;  // counted as the right end of the previous interval
    if ((g0 > 0.0) == (g1 > 0.0) && g1 != 0.0 && g0 != 0.0) continue;
    double b = g0 == 0.0 ? curve.bs[i] : (g1 == 0.0 ? curve.bs[i + 1] : numerics::bisect(g, curve.bs[i], curve.bs[i + 1], 1e-14));
    if (!out.empty() && std::abs(out.back().b - b) < 1e-9) continue;
    out.push_back({b, deflection(pot, curve.k, b), deflection_slope(pot, curve.k, b)});
  }
  return out;
}

struct ClassicalDcs {
  double value = 0.0;                    // dsigma/dtheta (length)
  bool no_classical_branch = false;      // dark side: theta beyond max|Theta|
  std::vector<ClassicalBranch> branches;
};

/// dsigma/dtheta = sum over branches of |db/dtheta| = 1/|dTheta/db|.
/// Beyond max|Theta| (dark side) returns exactly 0 with the flag set. A
/// branch with zero slope (caustic) gives +inf.
inline ClassicalDcs classical_dcs_2d(const DeflectionCurve& curve, double theta) {
  if (!(theta > 0.0) || theta > std::numbers::pi) throw Error(ErrorKind::InvalidInput, "theta must be in (0, pi]");
  ClassicalDcs out;
  if (theta > curve.max_abs_deflection()) {
    out.no_classical_branch = true;
    return out;
  }
  out.branches = classical_branches(curve, theta);
  if (out.branches.empty()) out.no_classical_branch = true;
  for (const auto& br : out.branches) out.value += 1.0 / std::abs(br.dtheta_db);
  return out;
}

/// Total classical 2D cross section for impact parameters |b| <= b_max.
inline double classical_total_2d(const DeflectionCurve& /*curve*/, double b_max) {
  if (!(b_max >= 0.0)) throw Error(ErrorKind::InvalidInput, "b_max must be nonnegative");
  return 2.0 * b_max;
}

struct Classical3dComparison {
  double per_steradian = 0.0;  // dsigma_3D/dOmega = sum (b / sin theta) |dTheta/db|^-1
  double per_angle = 0.0;      // dsigma_3D/dtheta = sum 2 pi b |db/dtheta|
  double dcs_2d = 0.0;         // the 2D value on the same branches
  bool no_classical_branch = false;
  bool glory_divergence = false;  // sin(theta) -> 0 with a branch at b != 0
  std::vector<ClassicalBranch> branches;
};

/// 3D classical cross sections on the same branches, for comparison with 2D.
inline Classical3dComparison classical_dcs_3d_compare(const DeflectionCurve& curve, double theta) {
  const auto two_d = classical_dcs_2d(curve, theta);
  Classical3dComparison out;
  out.no_classical_branch = two_d.no_classical_branch;
  out.branches = two_d.branches;
  out.dcs_2d = two_d.value;
  const double s = std::sin(theta);
  for (const auto& br : out.branches) {
    const double inv_slope = 1.0 / std::abs(br.dtheta_db);
    out.per_angle += 2.0 * std::numbers::pi * std::abs(br.b) * inv_slope;
    if (std::abs(s) < 1e-12 && br.b != 0.0) {
      out.glory_divergence = true;
      out.per_steradian = std::numeric_limits<double>::infinity();
    } else if (!out.glory_divergence) {
      out.per_steradian += std::abs(br.b) / std::abs(s) * inv_slope;
    }
  }
  return out;
}

struct OrbitingInfo {
  bool exists = false;
  double b0 = 0.0;
  double r0 = 0.0;
  double E_crit = 0.0;           // k^2 = U(r0) + k^2 b0^2 / r0^2
  double log_coeff_above = 0.0;  // c in Theta = const + c ln((b - b0)/b0), b > b0
  double log_coeff_below = 0.0;  // slope in Theta = const + c' ln((b0 - b)/b0), b < b0
  double F_at_r0 = 0.0;          // residuals of the two orbiting conditions
  double F_prime_at_r0 = 0.0;
};

namespace detail {

struct LineFit {
  double intercept, slope;
};

inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  return {(sy - slope * sx) / n, slope};
}

}  // namespace detail

/// Relative offsets |b - b0| / b0 used to fit the orbiting logarithms.
inline std::vector<double> orbiting_fit_offsets() {
  std::vector<double> s;
  for (int i = 0; i <= 8; ++i) s.push_back(std::pow(10.0, -8.0 + 0.5 * i));
  return s;
}

/// Locates a critical orbit: d(U + b^2 k^2 / r^2)/dr = 0 and
/// k^2 = U(r0) + k^2 b0^2 / r0^2. Eliminating b0 gives
/// k^2 - U(r) - r U'(r) / 2 = 0, solved for r where U' > 0 and the effective
/// potential has a maximum; b0 = sqrt(r0^3 U'(r0) / 2) / k. The b grid bounds
/// the admissible b0. The logarithmic divergence of Theta on both sides of b0
/// is then fitted on log-spaced samples.
inline OrbitingInfo detect_orbiting(const RadialPotential& pot, double k, const std::vector<double>& bs) {
  if (bs.size() < 2 || !numerics::strictly_increasing(bs))
    throw Error(ErrorKind::InvalidInput, "b grid must be strictly increasing with at least 2 points");
  OrbitingInfo info;
  auto g = [&](double r) { return k * k - pot(r) - 0.5 * r * pot.derivative(r); };
  auto curvature = [&](double r) {
    const double h = 1e-4 * r;
    const double u2 = (pot.derivative(r + h) - pot.derivative(r - h)) / (2.0 * h);
    return u2 + 3.0 * pot.derivative(r) / r;  // V_eff'' at an orbit
  };

  const double r_hi = std::max(pot.r_range(), bs.back()) * 1.5;
  std::optional<double> best;
  double r_prev = r_hi * 1e-6, g_prev = g(r_prev);
  for (double r = r_prev * 1.002; r <= r_hi; r *= 1.002) {
    const double gr = g(r);
    if ((gr > 0.0) != (g_prev > 0.0)) {
      const double root = numerics::bisect(g, r_prev, r);
      if (pot.derivative(root) > 0.0 && curvature(root) < 0.0) best = root;
    }
    r_prev = r;
    g_prev = gr;
  }
  if (!best) return info;
  const double r0 = *best;
  const double b0 = std::sqrt(r0 * r0 * r0 * pot.derivative(r0) / 2.0) / k;
  if (b0 < bs.front() || b0 > bs.back()) return info;

  info.exists = true;
  info.r0 = r0;
  info.b0 = b0;
  info.E_crit = pot(r0) + k * k * b0 * b0 / (r0 * r0);
  info.F_at_r0 = classical_F(pot, k, b0, r0);
  info.F_prime_at_r0 = classical_F_prime(pot, k, b0, r0);

  std::vector<double> xa, ya, xb, yb;
  for (double s : orbiting_fit_offsets()) {
    try {
      const double th = deflection(pot, k, b0 * (1.0 + s));
      xa.push_back(std::log(s));
      ya.push_back(th);
    } catch (const Error&) {
    }
    try {
      const double th = deflection(pot, k, b0 * (1.0 - s));
      xb.push_back(std::log(s));
      yb.push_back(th);
    } catch (const Error&) {
    }
  }
  if (xa.size() < 5 || xb.size() < 5)
    throw Error(ErrorKind::IllConditionedFit, "fewer than 5 usable samples on a side of b0");
  info.log_coeff_above = detail::least_squares_line(xa, ya).slope;
  info.log_coeff_below = detail::least_squares_line(xb, yb).slope;
  return info;
}

}  // namespace scatter2d
