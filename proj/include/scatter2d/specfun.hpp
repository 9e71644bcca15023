#pragma once

// Integer-order Bessel J_m, Neumann Y_m and the Airy function Ai for real
// arguments. Each function has an explicit power-series path and an explicit
// large-argument asymptotic path; Auto dispatches between them.
//
// Crossovers used by Auto:
//   J_m, Y_m : series for x <= 12; Hankel expansion for x >= max(12, 2m)
//              when its smallest retained term is below 1e-15 relative;
//              otherwise three-term recurrence (Miller backward recurrence
//              for J, forward recurrence from Y_0 and Y_1 for Y).
//   Ai       : series for |x| <= 6, asymptotic expansions beyond.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scatter2d/error.hpp"

namespace scatter2d::specfun {

enum class EvaluationPath { Series, Asymptotic, Auto };

inline constexpr double kBesselSeriesLimit = 12.0;
inline constexpr double kNeumannMinArgument = 1e-12;
inline constexpr double kAirySeriesLimit = 6.0;

/// Nominal Auto crossover for order m.
inline double bessel_crossover(int m) { return std::max(kBesselSeriesLimit, 2.0 * m); }

namespace detail {

constexpr double kEulerGamma = 0.57721566490153286061;

inline void check_order(int m) {
  if (m < 0) throw Error(ErrorKind::Domain, "Bessel order must be nonnegative, got " + std::to_string(m));
}

inline double j_series(int m, double x) {
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  const double half = 0.5 * x;
  const double q = -half * half;
  // Leading term (x/2)^m / m!, formed in logs so large orders do not overflow.
  double term = std::exp(m * std::log(half) - std::lgamma(m + 1.0));
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > half) break;
  }
  return sum;
}

inline double y_series(int n, double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  // Finite sum: -(x/2)^{-n}/pi * sum_{k<n} (n-k-1)!/k! (x^2/4)^k
  double finite = 0.0;
  if (n > 0) {
    double term = std::exp(std::lgamma(static_cast<double>(n)) - n * std::log(half));
    for (int k = 0; k < n; ++k) {
      finite += term;
      if (k + 1 < n) term *= q / ((k + 1.0) * (n - k - 1.0));
    }
  }
  // Psi-weighted series: (x/2)^n/pi * sum_k [psi(k+1)+psi(n+k+1)] (-x^2/4)^k / (k!(n+k)!)
  double psi_k = -kEulerGamma;
  double psi_nk = -kEulerGamma;
  for (int j = 1; j <= n; ++j) psi_nk += 1.0 / j;
  double term = std::exp(n * std::log(half) - std::lgamma(n + 1.0));
  double series = (psi_k + psi_nk) * term;
  for (int k = 1; k < 500; ++k) {
    term *= -q / (static_cast<double>(k) * (k + n));
    psi_k += 1.0 / k;
    psi_nk += 1.0 / (n + k);
    const double add = (psi_k + psi_nk) * term;
    series += add;
    if (std::abs(add) < 1e-17 * std::abs(series) && k > half) break;
  }
  return -finite / std::numbers::pi + (2.0 / std::numbers::pi) * std::log(half) * j_series(n, x) -
         series / std::numbers::pi;
}

struct HankelResult {
  double j;
  double y;
  double smallest_term;  // truncation error estimate, relative to P ~ 1
};

// Hankel large-argument expansion, truncated at its smallest term.
inline HankelResult hankel(int m, double x) {
  const double mu = 4.0 * m * m;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double smallest = 1.0;
  for (int j = 1; j < 200; ++j) {
    const double odd = 2.0 * j - 1.0;
    const double next = term * (mu - odd * odd) / (j * 8.0 * x);
    if (std::abs(next) >= std::abs(term) && j > 1) break;
    term = next;
    // a_j/x^j contributes to Q (odd j) or P (even j) with sign (-1)^floor(j/2)
    const double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
    if (j % 2 == 1) q += sign * term; else p += sign * term;
    smallest = std::abs(term);
    if (smallest < 1e-17) break;
  }
  // chi = x - m pi/2 - pi/4, with the m pi/2 shift applied exactly via m mod 4.
  const double c = std::cos(x - std::numbers::pi / 4.0);
  const double s = std::sin(x - std::numbers::pi / 4.0);
  double cos_chi = c, sin_chi = s;
  switch (m % 4) {
    case 1: cos_chi = s; sin_chi = -c; break;
    case 2: cos_chi = -c; sin_chi = -s; break;
    case 3: cos_chi = -s; sin_chi = c; break;
    default: break;
  }
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  return {amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi), smallest};
}

// Miller backward recurrence normalized by J_0 + 2 sum J_{2k} = 1.
inline double j_miller(int m, double x) {
  const int top = std::max(m, static_cast<int>(x));
  int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
  start += start % 2;
  double next = 0.0, current = 1e-300;
  double norm = 0.0, value = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / x) * current - next;
    next = current;
    current = prev;  // J_{k-1} up to scale
    if (k - 1 == m) value = current;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0 ? 1.0 : 2.0) * current;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      value *= 1e-250;
    }
  }
  return value / norm;
}

inline double y_forward(int m, double y0, double y1, double x) {
  if (m == 0) return y0;
  for (int k = 1; k < m; ++k) {
    const double y2 = (2.0 * k / x) * y1 - y0;
    y0 = y1;
    y1 = y2;
  }
  return y1;
}

inline bool hankel_acceptable(int m, double x, const HankelResult& h) {
  return x >= bessel_crossover(m) && h.smallest_term < 1e-15;
}

}  // namespace detail

/// Ordinary Bessel function J_m(x), m >= 0, x >= 0.
inline double bessel_j(int m, double x, EvaluationPath path = EvaluationPath::Auto) {
  detail::check_order(m);
  if (!(x >= 0.0)) throw Error(ErrorKind::Domain, "bessel_j requires x >= 0");
  if (path == EvaluationPath::Series) return detail::j_series(m, x);
  if (path == EvaluationPath::Asymptotic) {
    if (x == 0.0) throw Error(ErrorKind::Domain, "asymptotic bessel_j needs x > 0");
    return detail::hankel(m, x).j;
  }
  if (x <= kBesselSeriesLimit) return detail::j_series(m, x);
  if (x >= bessel_crossover(m)) {
    const auto h = detail::hankel(m, x);
    if (detail::hankel_acceptable(m, x, h)) return h.j;
  }
  return detail::j_miller(m, x);
}

/// Neumann function Y_m(x) (N_m in some texts), m >= 0. Rejects x below
/// kNeumannMinArgument, where the logarithmic singularity takes over.
inline double bessel_y(int m, double x, EvaluationPath path = EvaluationPath::Auto) {
  detail::check_order(m);
  if (!(x >= kNeumannMinArgument))
    throw Error(ErrorKind::Domain, "bessel_y requires x >= 1e-12 (singular at the origin)");
  if (path == EvaluationPath::Series) return detail::y_series(m, x);
  if (path == EvaluationPath::Asymptotic) return detail::hankel(m, x).y;
  if (x >= bessel_crossover(m)) {
    const auto h = detail::hankel(m, x);
    if (detail::hankel_acceptable(m, x, h)) return h.y;
  }
  double y0, y1;
  if (x <= kBesselSeriesLimit) {
    y0 = detail::y_series(0, x);
    y1 = detail::y_series(1, x);
  } else {
    y0 = detail::hankel(0, x).y;
    y1 = detail::hankel(1, x).y;
  }
  return detail::y_forward(m, y0, y1, x);
}

namespace detail {

constexpr double kAi0 = 0.355028053887817239260063186004;
constexpr double kAiPrime0 = -0.258819403792806798405183560189;

inline double airy_series(double x) {
  const double x3 = x * x * x;
  double f = 1.0, g = x;
  double tf = 1.0, tg = x;
  for (int k = 1; k < 300; ++k) {
    tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
    tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
    f += tf;
    g += tg;
    if (std::abs(tf) < 1e-18 * std::abs(f) && std::abs(tg) < 1e-18 * (std::abs(g) + 1e-300)) break;
  }
  return kAi0 * f + kAiPrime0 * g;
}

inline double airy_asymptotic(double x) {
  if (x > 0.0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    double sum = 1.0, u = 1.0, last = 1.0;
    for (int k = 1; k < 60; ++k) {
      u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
      const double t = u / std::pow(zeta, k);
      if (t >= last) break;
      sum += (k % 2 ? -t : t);
      last = t;
      if (t < 1e-17) break;
    }
    return std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25)) * sum;
  }
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  double even = 1.0, odd = 0.0, u = 1.0, last = 1.0;
  for (int k = 1; k < 60; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    const double t = u / std::pow(zeta, k);
    if (t >= last) break;
    last = t;
    // u_k / zeta^k enters the even sum for even k, the odd sum for odd k,
    // each with alternating sign within its own sum.
    if (k % 2 == 0) even += ((k / 2) % 2 ? -t : t);
    else odd += (((k - 1) / 2) % 2 ? -t : t);
    if (t < 1e-17) break;
  }
  const double phase = zeta + std::numbers::pi / 4.0;
  return (std::sin(phase) * even - std::cos(phase) * odd) / (std::sqrt(std::numbers::pi) * std::pow(z, 0.25));
}

}  // namespace detail

/// Airy function Ai(x) for any finite real x.
inline double airy_ai(double x, EvaluationPath path = EvaluationPath::Auto) {
  if (!std::isfinite(x)) throw Error(ErrorKind::Domain, "airy_ai requires a finite argument");
  if (path == EvaluationPath::Series) return detail::airy_series(x);
  if (path == EvaluationPath::Asymptotic) {
    if (x == 0.0) throw Error(ErrorKind::Domain, "asymptotic airy_ai is undefined at 0");
    return detail::airy_asymptotic(x);
  }
  return std::abs(x) <= kAirySeriesLimit ? detail::airy_series(x) : detail::airy_asymptotic(x);
}

/// Leading-order large-|x| forms of Ai, used as reference shapes for the
/// dark side (x > 0) and the oscillatory bright side (x < 0).
inline double airy_ai_leading(double x) {
  if (x > 0.0) return std::exp(-2.0 * std::pow(x, 1.5) / 3.0) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25));
  const double z = -x;
  return std::sin(2.0 * std::pow(z, 1.5) / 3.0 + std::numbers::pi / 4.0) / (std::sqrt(std::numbers::pi) * std::pow(z, 0.25));
}

}  // namespace scatter2d::specfun
