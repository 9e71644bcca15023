#pragma once

// Semiclassical layer: WKB wave function and phase shift, the deflection
// identity Theta = 2 d(delta)/dm, the Eikonal phase and amplitude,
// stationary-phase amplitudes, two-branch interference, and the
// rainbow/Airy machinery with its asymptotic forms and periods.
//
// The WKB radial function uses F_wkb = k^2 - U - m^2/r^2 (Langer form), the
// same F as the classical layer with b = m/k.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "scatter2d/classical.hpp"
#include "scatter2d/error.hpp"
#include "scatter2d/numerics.hpp"
#include "scatter2d/potential.hpp"
#include "scatter2d/quantum.hpp"
#include "scatter2d/specfun.hpp"

namespace scatter2d {

/// Step for the m-derivatives of the WKB phase: 1e-4 max(m, 1).
inline double wkb_fd_step(double m) { return 1e-4 * std::max(std::abs(m), 1.0); }

namespace detail {

// Turning point of F_wkb, or 0 when m = 0 and F_wkb > 0 all the way in.
inline double wkb_turning_point(const RadialPotential& pot, double k, double m) {
  try {
    return turning_point(pot, k, m / k);
  } catch (const Error& e) {
    if (m == 0.0 && e.kind() == ErrorKind::NoTurningPoint) return 0.0;
    throw;
  }
}

// Free-motion antiderivative of sqrt(k^2 - m^2/r^2) - k, valid for kr >= m.
// Tends to -m pi/2 as r -> infinity.
inline double free_phase_antiderivative(double k, double m, double r) {
  const double kr = k * r;
  const double s = std::sqrt(std::max(kr * kr - m * m, 0.0));
  const double acos_term = m == 0.0 ? 0.0 : m * std::acos(std::min(m / kr, 1.0));
  // sqrt(k^2 r^2 - m^2) - k r, formed without cancellation
  return -m * m / (s + kr) - acos_term;
}

template <class F>
double checked_integral(F&& f, double a, double b, const char* what) {
  const auto res = numerics::integrate(f, a, b, 1e-13, 1e-12, 8000);
  if (!(res.error <= 1e-9 * std::abs(res.value) + 1e-12))
    throw Error(ErrorKind::NoConvergence,
                std::string(what) + " quadrature did not converge (estimated error " + std::to_string(res.error) + ")");
  return res.value;
}

// integral_{r0}^{r1} (sqrt(F_wkb) - shift) dr, with r = r0 + u^2 when r0 is
// a turning point.
inline double wkb_phase_integral(const RadialPotential& pot, double k, double m, double r0, double r1,
                                 double shift) {
  if (r1 <= r0) return 0.0;
  if (r0 == 0.0) {
    auto f = [&](double r) {
      const double F = k * k - pot(r) - m * m / (r * r);
      return std::sqrt(std::max(F, 0.0)) - shift;
    };
    return checked_integral(f, 0.0, r1, "WKB phase");
  }
  const RootShiftedF shifted_F(pot, k, m / k, r0);
  auto f = [&](double u) {
    const double x = u * u;
    return 2.0 * u * (std::sqrt(std::max(shifted_F(x), 0.0)) - shift);
  };
  return checked_integral(f, 0.0, std::sqrt(r1 - r0), "WKB phase");
}

}  // namespace detail

/// WKB radial function F^{-1/4} cos(integral_{r0}^{r} F^{1/2} dr' - pi/4) on a
/// strictly increasing grid of radii beyond the turning point. Normalization
/// is free. Points at or inside r0 are rejected.
inline std::vector<double> wkb_wavefunction(const RadialPotential& pot, double k, double m,
                                            const std::vector<double>& r_grid) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidInput, "k must be positive");
  if (!(m >= 0.0)) throw Error(ErrorKind::InvalidInput, "m must be nonnegative");
  if (!numerics::strictly_increasing(r_grid)) throw Error(ErrorKind::InvalidInput, "r grid must be strictly increasing");
  std::vector<double> out;
  if (r_grid.empty()) return out;
  const double r0 = detail::wkb_turning_point(pot, k, m);
  if (!(r_grid.front() > r0))
    throw Error(ErrorKind::Domain, "WKB wave function is invalid at or inside the turning point r0 = " +
                                       std::to_string(r0));
  double phase = detail::wkb_phase_integral(pot, k, m, r0, r_grid.front(), 0.0);
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (i > 0) {
      auto f = [&](double r) { return std::sqrt(std::max(k * k - pot(r) - m * m / (r * r), 0.0)); };
      phase += detail::checked_integral(f, r_grid[i - 1], r_grid[i], "WKB phase");
    }
    const double r = r_grid[i];
    const double F = k * k - pot(r) - m * m / (r * r);
    out.push_back(std::pow(F, -0.25) * std::cos(phase - std::numbers::pi / 4.0));
  }
  return out;
}

/// Absolute (unwrapped) WKB phase shift
///   delta = m pi/2 + integral_{r0}^{inf} (F^{1/2} - k) dr - k r0
/// for continuous m >= 0. Beyond max(r_range, 2 r0, 2m/k) the potential is
/// dropped and the free integral is done in closed form; slowly decaying
/// potentials are screened at r_range.
inline double wkb_phase_shift(const RadialPotential& pot, double k, double m) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidInput, "k must be positive");
  if (!(m >= 0.0)) throw Error(ErrorKind::InvalidInput, "m must be nonnegative");
  const double r0 = detail::wkb_turning_point(pot, k, m);
  const double r_t = std::max({pot.r_range(), 2.0 * r0, 2.0 * m / k});
  const double inner = detail::wkb_phase_integral(pot, k, m, r0, r_t, k);
  const double tail = -m * std::numbers::pi / 2.0 - detail::free_phase_antiderivative(k, m, r_t);
  return m * std::numbers::pi / 2.0 + inner + tail - k * r0;
}

/// WKB phase shifts for m = 0..m_max (parallel over m).
inline PhaseShiftTable wkb_phase_shifts(const RadialPotential& pot, double k, int m_max) {
  if (m_max < 0) throw Error(ErrorKind::InvalidInput, "m_max must be nonnegative");
  PhaseShiftTable t;
  t.k = k;
  t.method = PhaseMethod::WKB;
  t.deltas = numerics::parallel_map(static_cast<std::size_t>(m_max + 1),
                                    [&](std::size_t m) { return wkb_phase_shift(pot, k, static_cast<double>(m)); });
  return t;
}

/// Theta = 2 d(delta_WKB)/dm by a Richardson-extrapolated centered difference.
inline double deflection_from_wkb(const RadialPotential& pot, double k, double m) {
  if (!(m >= 0.0)) throw Error(ErrorKind::InvalidInput, "m must be nonnegative");
  if (m == 0.0) return deflection(pot, k, 0.0);
  const double h = std::min(wkb_fd_step(m), 0.5 * m);
  return 2.0 * numerics::derivative([&](double x) { return wkb_phase_shift(pot, k, x); }, m, h);
}

/// Quantum phase shifts shifted by multiples of pi to follow a reference
/// (absolute) phase sequence by continuity in m, starting from the high-m
/// tail where both vanish.
inline std::vector<double> align_branches(const std::vector<double>& principal, const std::vector<double>& reference) {
  if (principal.size() != reference.size()) throw Error(ErrorKind::InvalidInput, "phase tables differ in length");
  std::vector<double> out(principal.size());
  if (out.empty()) return out;
  const std::size_t last = out.size() - 1;
  auto nearest = [](double value, double target) {
    return value + std::numbers::pi * std::round((target - value) / std::numbers::pi);
  };
  out[last] = nearest(principal[last], reference[last]);
  for (std::size_t i = last; i-- > 0;) {
    const double predicted = out[i + 1] + (reference[i] - reference[i + 1]);
    out[i] = nearest(principal[i], predicted);
  }
  return out;
}

/// Eikonal phase delta = -(1/2k) integral_b^inf r U / sqrt(r^2 - b^2) dr,
/// computed as -(1/2k) integral_0^T U(sqrt(b^2 + t^2)) dt with t = sqrt(r^2 - b^2),
/// truncated at r = r_range (the screening radius for slowly decaying tails).
inline double eikonal_phase(const RadialPotential& pot, double k, double b) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidInput, "k must be positive");
  if (!(b >= 0.0)) throw Error(ErrorKind::InvalidInput, "b must be nonnegative");
  const double R = pot.r_range();
  if (b >= R) return 0.0;
  const double T = std::sqrt(R * R - b * b);
  auto f = [&](double t) { return pot(std::sqrt(b * b + t * t)); };
  const auto res = numerics::integrate(f, 0.0, T, 1e-14, 1e-13, 8000);
  return -res.value / (2.0 * k);
}

/// Eikonal phases at b = m/k for m = 0..m_max.
inline PhaseShiftTable eikonal_phase_shifts(const RadialPotential& pot, double k, int m_max) {
  if (m_max < 0) throw Error(ErrorKind::InvalidInput, "m_max must be nonnegative");
  PhaseShiftTable t;
  t.k = k;
  t.method = PhaseMethod::Eikonal;
  t.deltas = numerics::parallel_map(static_cast<std::size_t>(m_max + 1),
                                    [&](std::size_t m) { return eikonal_phase(pot, k, static_cast<double>(m) / k); });
  return t;
}

/// Impact-parameter profile of the Eikonal phase, tabulated once on
/// Gauss-Legendre panels over [0, b_max] and reused for every angle.
class EikonalProfile {
 public:
  /// Panels are no wider than an eighth of the oscillation period of
  /// cos(k b theta_max) and a 32nd of r_range.
  EikonalProfile(const RadialPotential& pot, double k, double b_max, double theta_max)
      : k_(k), b_max_(b_max) {
    if (!(k > 0.0)) throw Error(ErrorKind::InvalidInput, "k must be positive");
    if (!(b_max >= pot.r_range()))
      throw Error(ErrorKind::InvalidInput, "b_max must reach the potential range " + std::to_string(pot.r_range()));
    if (!(theta_max >= 0.0)) throw Error(ErrorKind::InvalidInput, "theta must be nonnegative");
    double panel = pot.r_range() / 32.0;
    if (theta_max > 0.0) panel = std::min(panel, 2.0 * std::numbers::pi / (k * theta_max) / 8.0);
    const int panels = std::max(1, static_cast<int>(std::ceil(b_max / panel)));
    const numerics::GaussLegendre rule(kNodes);
    const double w = b_max / panels;
    for (int p = 0; p < panels; ++p)
      for (int i = 0; i < kNodes; ++i) {
        nodes_.push_back(w * (p + 0.5 * (1.0 + rule.nodes[i])));
        weights_.push_back(0.5 * w * rule.weights[i]);
      }
    phases_ = numerics::parallel_map(nodes_.size(), [&](std::size_t i) { return eikonal_phase(pot, k, nodes_[i]); });
    tail_ = std::abs(std::exp(std::complex<double>(0.0, 2.0 * eikonal_phase(pot, k, b_max))) - 1.0);
  }

  /// f_Eik(theta) = -i k sqrt(2/pi) integral_0^b_max cos(k b theta) [exp(2 i delta) - 1] db.
  std::complex<double> amplitude(double theta) const {
    if (!(theta >= 0.0)) throw Error(ErrorKind::InvalidInput, "theta must be nonnegative");
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const std::complex<double> bracket = std::exp(std::complex<double>(0.0, 2.0 * phases_[i])) - 1.0;
      sum += weights_[i] * std::cos(k_ * nodes_[i] * theta) * bracket;
    }
    return std::complex<double>(0.0, -k_ * std::sqrt(2.0 / std::numbers::pi)) * sum;
  }

  /// |exp(2 i delta(b_max)) - 1|: size of the integrand where it is cut off.
  double truncation_estimate() const { return tail_; }
  double b_max() const { return b_max_; }

 private:
  static constexpr int kNodes = 16;
  double k_, b_max_;
  std::vector<double> nodes_, weights_, phases_;
  double tail_ = 0.0;
};

inline std::complex<double> eikonal_amplitude(const RadialPotential& pot, double k, double theta, double b_max) {
  return EikonalProfile(pot, k, b_max, theta).amplitude(theta);
}

// ---- stationary phase ------------------------------------------------------

struct StationaryBranch {
  double m_s;          // stationary angular momentum k b
  double b_s;
  int branch_sign;     // +1 for f(+) (Theta = -theta - 2 kappa pi), -1 for f(-)
  double dtheta_dm;    // slope of Theta(m) at m_s
  int kappa;           // winding count
  double theta_defl;   // Theta(m_s)
};

struct BranchSet {
  double theta = 0.0;
  std::vector<StationaryBranch> branches;
};

inline int default_kappa_max(const OrbitingInfo& orbiting) { return orbiting.exists ? 3 : 0; }

/// Stationary points of the f(+) and f(-) phases, i.e. all m with
/// Theta(m) = -theta - 2 kappa pi (f+) or Theta(m) = theta - 2 kappa pi (f-),
/// kappa = 0..kappa_max, bracketed on the sampled curve and refined by
/// bisection. An empty set (dark side) is a valid result.
inline BranchSet stationary_points(const DeflectionCurve& curve, double theta, int kappa_max = 0) {
  if (!(theta > 0.0) || theta > std::numbers::pi) throw Error(ErrorKind::InvalidInput, "theta must be in (0, pi]");
  if (kappa_max < 0) throw Error(ErrorKind::InvalidInput, "kappa_max must be nonnegative");
  BranchSet set;
  set.theta = theta;
  const auto& pot = *curve.potential;
  const double k = curve.k;
  for (int kappa = 0; kappa <= kappa_max; ++kappa) {
    for (int sign : {+1, -1}) {
      const double target = -sign * theta - 2.0 * kappa * std::numbers::pi;
      auto g = [&](double b) { return deflection(pot, k, b) - target; };
      std::optional<double> last;
      for (std::size_t i = 0; i + 1 < curve.bs.size(); ++i) {
        if (!curve.valid(i) || !curve.valid(i + 1)) continue;
        const double g0 = curve.thetas_defl[i] - target, g1 = curve.thetas_defl[i + 1] - target;
        if (g0 == 0.0 && i > 0) continue;
        if (g0 != 0.0 && g1 != 0.0 && (g0 > 0.0) == (g1 > 0.0)) continue;
        const double b = numerics::bisect(g, curve.bs[i], curve.bs[i + 1], 1e-14);
        if (last && std::abs(b - *last) < 1e-9) continue;
        last = b;
        if (b <= 0.0) continue;
        set.branches.push_back({k * b, b, sign, deflection_slope(pot, k, b) / k, kappa, deflection(pot, k, b)});
      }
    }
  }
  return set;
}

inline BranchSet stationary_points(const RadialPotential& pot, double k, double theta, const std::vector<double>& b_grid,
                                   int kappa_max = 0) {
  return stationary_points(deflection_curve(pot, k, b_grid), theta, kappa_max);
}

inline constexpr double kSlopeFloor = 1e-6;

/// Stationary-phase amplitude f(+) + f(-): each branch contributes
///   -i |dTheta/dm|^{-1/2} exp(i[+-m theta + 2 delta(m) + 2 pi kappa m + s pi/4])
/// with s the sign of dTheta/dm (the extra -pi/2 on negative-slope branches).
/// The -i is the phase of (exp(2 i delta) - 1)/(2i) in the partial-wave sum,
/// kept so the result can be compared with the exact amplitude.
/// Throws CausticProximity when a slope is below kSlopeFloor.
inline std::complex<double> spa_amplitude(const BranchSet& set, const std::function<double(double)>& delta_of_m) {
  std::complex<double> f = 0.0;
  for (const auto& br : set.branches) {
    if (std::abs(br.dtheta_dm) < kSlopeFloor)
      throw Error(ErrorKind::CausticProximity, "stationary point at m = " + std::to_string(br.m_s) +
                                                   " is on a caustic; use the Airy form");
    const double s = br.dtheta_dm > 0.0 ? 1.0 : -1.0;
    const double phase = br.branch_sign * br.m_s * set.theta + 2.0 * delta_of_m(br.m_s) +
                         2.0 * std::numbers::pi * br.kappa * br.m_s + s * std::numbers::pi / 4.0;
    f += std::complex<double>(0.0, -1.0) * std::polar(1.0 / std::sqrt(std::abs(br.dtheta_dm)), phase);
  }
  return f;
}

/// Stationary-phase amplitude with WKB phase shifts.
inline std::complex<double> spa_amplitude(const BranchSet& set, const RadialPotential& pot, double k) {
  return spa_amplitude(set, [&](double m) { return wkb_phase_shift(pot, k, m); });
}

/// Two-branch interference cross section
///   |db1/dtheta| + |db2/dtheta|
///     + 2 |db1/dtheta db2/dtheta|^{1/2} sin[k (b1 - b2) theta + 2 (delta1 - delta2)].
inline double two_branch_dcs(double b1, double b2, double db1_dtheta, double db2_dtheta, double delta1, double delta2,
                             double k, double theta) {
  if (b1 == b2) throw Error(ErrorKind::InvalidInput, "two_branch_dcs needs distinct impact parameters");
  const double a1 = std::abs(db1_dtheta), a2 = std::abs(db2_dtheta);
  return a1 + a2 + 2.0 * std::sqrt(a1 * a2) * std::sin(k * (b1 - b2) * theta + 2.0 * (delta1 - delta2));
}

// ---- rainbow ----------------------------------------------------------------

struct RainbowInfo {
  double m_r = 0.0;
  double b_r = 0.0;
  double theta_r = 0.0;      // |Theta(m_r)|
  double theta_defl_r = 0.0; // Theta(m_r), signed
  double theta_dd = 0.0;     // Theta''(m_r), second derivative in m
  double slope_at_b_r = 0.0; // dTheta/db at b_r (residual)

  /// |d^2 Theta / db^2| at b_r = k^2 |Theta''(m_r)|.
  double theta_bb(double k) const { return k * k * std::abs(theta_dd); }
};

/// Interior extremum of Theta(b) on [b_lo, b_hi]: grid scan, then bisection
/// on the sign change of dTheta/db. Picks the extremum with the largest
/// |Theta| when there are several. Throws NoExtremum when Theta is monotone.
inline RainbowInfo find_rainbow(const RadialPotential& pot, double k, double b_lo, double b_hi, int samples = 200) {
  if (!(b_lo >= 0.0) || !(b_hi > b_lo)) throw Error(ErrorKind::InvalidInput, "invalid b bracket");
  const auto bs = numerics::linspace(b_lo, b_hi, static_cast<std::size_t>(std::max(samples, 8)));
  const auto curve = deflection_curve(pot, k, bs);
  std::optional<std::size_t> best;
  for (std::size_t i = 1; i + 1 < bs.size(); ++i) {
    if (!curve.valid(i - 1) || !curve.valid(i) || !curve.valid(i + 1)) continue;
    const double a = curve.thetas_defl[i - 1], c = curve.thetas_defl[i], d = curve.thetas_defl[i + 1];
    const bool extremum = (c > a && c >= d) || (c < a && c <= d);
    if (extremum && (!best || std::abs(c) > std::abs(curve.thetas_defl[*best]))) best = i;
  }
  if (!best) throw Error(ErrorKind::NoExtremum, "deflection function is monotone on the bracket");
  auto slope = [&](double b) { return deflection_slope(pot, k, b); };
  const double lo = bs[*best - 1], hi = bs[*best + 1];
  double b_r;
  if ((slope(lo) > 0.0) != (slope(hi) > 0.0)) {
    b_r = numerics::bisect(slope, lo, hi, 1e-15);
  } else {
    const double sgn = curve.thetas_defl[*best] > curve.thetas_defl[*best - 1] ? -1.0 : 1.0;
    b_r = numerics::golden_minimize([&](double b) { return sgn * deflection(pot, k, b); }, lo, hi, 1e-12).x;
  }
  RainbowInfo info;
  info.b_r = b_r;
  info.m_r = k * b_r;
  info.theta_defl_r = deflection(pot, k, b_r);
  info.theta_r = std::abs(info.theta_defl_r);
  info.slope_at_b_r = slope(b_r);
  const double h = wkb_fd_step(info.m_r);
  info.theta_dd = numerics::second_derivative([&](double m) { return deflection(pot, k, m / k); }, info.m_r, h);
  if (info.theta_dd == 0.0) throw Error(ErrorKind::NoExtremum, "degenerate extremum (Theta'' = 0)");
  return info;
}

struct AiryDcs {
  double value = 0.0;
  bool outside_window = false;  // |theta - theta_r| > 0.5 theta_r
};

/// Scaled Airy argument 2^{1/3} k^{2/3} (theta - theta_r) / |d^2Theta/db^2|^{1/3}.
inline double airy_argument(const RainbowInfo& info, double k, double theta) {
  return std::cbrt(2.0) * std::cbrt(k * k) * (theta - info.theta_r) / std::cbrt(info.theta_bb(k));
}

/// Rainbow cross section
///   2^{5/3} k^{1/3} pi / |d^2Theta/db^2|^{2/3} Ai^2(airy_argument).
inline AiryDcs airy_amplitude_dcs(const RainbowInfo& info, double k, double theta) {
  const double D = info.theta_bb(k);
  const double ai = specfun::airy_ai(airy_argument(info, k, theta));
  AiryDcs out;
  out.value = std::pow(2.0, 5.0 / 3.0) * std::cbrt(k) * std::numbers::pi / std::pow(D, 2.0 / 3.0) * ai * ai;
  out.outside_window = std::abs(theta - info.theta_r) > 0.5 * info.theta_r;
  return out;
}

/// Dark-side (theta > theta_r) decay from the leading Ai asymptote.
inline double airy_dark_side(const RainbowInfo& info, double k, double theta) {
  const double dt = theta - info.theta_r;
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidInput, "dark side needs theta > theta_r");
  const double D = info.theta_bb(k);
  return std::exp(-4.0 * k * std::sqrt(2.0) / 3.0 * std::pow(dt, 1.5) / std::sqrt(D)) /
         (std::sqrt(2.0) * std::sqrt(D) * std::sqrt(dt));
}

/// Bright-side (theta < theta_r) oscillation from the leading Ai asymptote.
inline double airy_bright_side(const RainbowInfo& info, double k, double theta) {
  const double dt = info.theta_r - theta;
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidInput, "bright side needs theta < theta_r");
  const double D = info.theta_bb(k);
  const double s = std::sin(2.0 * k * std::sqrt(2.0) / 3.0 * std::pow(dt, 1.5) / std::sqrt(D) + std::numbers::pi / 4.0);
  return 2.0 * std::sqrt(2.0) * s * s / (std::sqrt(D) * std::sqrt(dt));
}

/// Angles below theta_r where the bright-side form peaks (sin^2 = 1),
/// nearest the rainbow first.
inline std::vector<double> airy_bright_side_maxima(const RainbowInfo& info, double k, int count) {
  const double D = info.theta_bb(k);
  std::vector<double> out;
  for (int n = 0; n < count; ++n) {
    const double g = std::numbers::pi / 2.0 + n * std::numbers::pi - std::numbers::pi / 4.0;
    const double dt = std::pow(3.0 * g * std::sqrt(D) / (2.0 * k * std::sqrt(2.0)), 2.0 / 3.0);
    out.push_back(info.theta_r - dt);
  }
  return out;
}

struct RainbowPeriods {
  double local_period;    // pi / (k sqrt2 sqrt(theta_r - theta) / sqrt|d^2Theta/db^2|)
  double uniform_period;  // 2 pi / |m1 - m2|
  double m1, m2;          // m_r +- sqrt2 sqrt(theta_r - theta) / |Theta''|^{1/2}
};

inline RainbowPeriods rainbow_periods(const RainbowInfo& info, double k, double theta) {
  if (!(theta < info.theta_r)) throw Error(ErrorKind::InvalidInput, "rainbow periods need theta < theta_r");
  const double dt = info.theta_r - theta;
  RainbowPeriods p;
  p.local_period = std::numbers::pi / (k * std::sqrt(2.0) * std::sqrt(dt) / std::sqrt(info.theta_bb(k)));
  const double spread = std::sqrt(2.0) * std::sqrt(dt) / std::sqrt(std::abs(info.theta_dd));
  p.m1 = info.m_r + spread;
  p.m2 = info.m_r - spread;
  p.uniform_period = 2.0 * std::numbers::pi / std::abs(p.m1 - p.m2);
  return p;
}

}  // namespace scatter2d
