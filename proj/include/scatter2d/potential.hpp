#pragma once

// Central potentials U(r) in units with hbar^2/(2 mu) = 1, so E = k^2 and
// U(r) is numerically the potential energy V(r).

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "scatter2d/error.hpp"

namespace scatter2d {

inline constexpr double kDefaultRangeEpsilon = 1e-10;

/// Immutable central potential. `r_range` is the radius beyond which
/// |U| < range_epsilon; for slowly decaying potentials (`slow_decay`) it is
/// instead the screening radius beyond which phase integrals treat U as 0.
/// When `coulomb_tail` is nonzero, U(r) = coulomb_tail / r exactly for
/// r >= tail_start, and orbit integrals use that closed form past r_range.
class RadialPotential {
 public:
  using Function = std::function<double(double)>;

  RadialPotential(Function value, double r_range, std::string label,
                  double range_epsilon = kDefaultRangeEpsilon, Function derivative = {})
      : value_(std::move(value)),
        derivative_(std::move(derivative)),
        r_range_(r_range),
        range_epsilon_(range_epsilon),
        label_(std::move(label)) {
    if (!(r_range_ > 0.0)) throw Error(ErrorKind::InvalidInput, "r_range must be positive");
  }

  double operator()(double r) const { return value_(r); }

  /// dU/dr, analytic when supplied, otherwise a centered difference.
  double derivative(double r) const {
    if (derivative_) return derivative_(r);
    const double h = 1e-5 * std::max(r, 1e-3);
    const double lo = std::max(r - h, 0.5 * r);
    return (value_(r + h) - value_(lo)) / (r + h - lo);
  }

  double r_range() const { return r_range_; }
  double range_epsilon() const { return range_epsilon_; }
  const std::string& label() const { return label_; }

  bool slow_decay() const { return slow_decay_; }
  double coulomb_tail() const { return coulomb_tail_; }
  double tail_start() const { return tail_start_; }

  /// Marks the potential as A/r beyond `start`, screened at r_range.
  RadialPotential& with_coulomb_tail(double strength, double start) {
    slow_decay_ = true;
    coulomb_tail_ = strength;
    tail_start_ = start;
    return *this;
  }

  /// Largest |U| beyond the screening radius, i.e. the truncation made by
  /// treating U as zero past r_range.
  double truncation_estimate() const {
    return slow_decay_ ? std::abs(coulomb_tail_) / r_range_ : range_epsilon_;
  }

 private:
  Function value_;
  Function derivative_;
  double r_range_;
  double range_epsilon_;
  std::string label_;
  bool slow_decay_ = false;
  double coulomb_tail_ = 0.0;
  double tail_start_ = 0.0;
};

inline RadialPotential make_zero() {
  return RadialPotential([](double) { return 0.0; }, 1.0, "zero", kDefaultRangeEpsilon,
                         [](double) { return 0.0; });
}

/// U(r) = U0 exp(-r^2/a^2).
inline RadialPotential make_gaussian(double U0, double a, double range_epsilon = kDefaultRangeEpsilon) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidInput, "gaussian width a must be positive");
  if (!std::isfinite(U0)) throw Error(ErrorKind::InvalidInput, "gaussian strength must be finite");
  const double ratio = std::abs(U0) / range_epsilon;
  const double r_range = ratio > 1.0 ? a * std::sqrt(std::log(ratio)) * (1.0 + 1e-9) : a;
  std::ostringstream label;
  label << "gaussian(U0=" << U0 << ",a=" << a << ")";
  return RadialPotential([U0, a](double r) { return U0 * std::exp(-(r * r) / (a * a)); }, r_range,
                         label.str(), range_epsilon,
                         [U0, a](double r) { return -2.0 * r / (a * a) * U0 * std::exp(-(r * r) / (a * a)); });
}

/// Piecewise Coulomb-parabolic model:
///   U = A/r                      for r > R_c
///   U = A/(2 R_c) [3 - (r/R_c)^2] for r <= R_c
/// Value and slope are continuous at R_c. The A/r tail is screened at
/// 10^3 R_c for phase integrals.
struct AppendixBParams {
  double A = 1.0;
  double R_c = 1.0;
};

inline constexpr double kAppendixBScreeningFactor = 1e3;

inline RadialPotential make_appendix_b(AppendixBParams p) {
  if (!(p.R_c > 0.0)) throw Error(ErrorKind::InvalidInput, "R_c must be positive");
  if (!std::isfinite(p.A)) throw Error(ErrorKind::InvalidInput, "A must be finite");
  const double A = p.A, Rc = p.R_c;
  std::ostringstream label;
  label << "appendix_b(A=" << A << ",R_c=" << Rc << ")";
  RadialPotential pot(
      [A, Rc](double r) {
        if (r > Rc) return A / r;
        const double s = r / Rc;
        return A / (2.0 * Rc) * (3.0 - s * s);
      },
      kAppendixBScreeningFactor * Rc, label.str(), kDefaultRangeEpsilon,
      [A, Rc](double r) { return r > Rc ? -A / (r * r) : -A * r / (Rc * Rc * Rc); });
  pot.with_coulomb_tail(A, Rc);
  return pot;
}

/// Threshold energy above which the Coulomb-core deflection function has a
/// rainbow maximum: E = 3A/(2 R_c), the height of the potential at r = 0.
inline double appendix_b_rainbow_threshold(AppendixBParams p) { return 3.0 * p.A / (2.0 * p.R_c); }

namespace detail {

// Fritsch-Carlson monotone cubic Hermite interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)), d_(x_.size()) {
    const std::size_t n = x_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    d_[0] = secant[0];
    d_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (secant[i - 1] * secant[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        // weighted harmonic mean keeps the interpolant monotone on each interval
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
        d_[i] = (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i]);
      }
    }
  }

  double operator()(double r) const {
    if (r <= x_.front()) return y_.front();
    if (r >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (r - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
           (t3 - t2) * h * d_[i + 1];
  }

 private:
  std::vector<double> x_, y_, d_;
};

}  // namespace detail

/// Monotone-cubic interpolant through (r, U) samples; constant below the
/// first radius and zero beyond the last one.
inline RadialPotential make_tabulated(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw Error(ErrorKind::InvalidInput, "tabulated potential needs at least 2 samples");
  std::vector<double> r, u;
  r.reserve(samples.size());
  u.reserve(samples.size());
  for (const auto& [ri, ui] : samples) {
    if (std::isnan(ri) || std::isnan(ui) || !std::isfinite(ri) || !std::isfinite(ui))
      throw Error(ErrorKind::InvalidInput, "tabulated potential contains a non-finite value");
    if (!r.empty() && !(ri > r.back()))
      throw Error(ErrorKind::InvalidInput, "tabulated r grid must be strictly increasing");
    r.push_back(ri);
    u.push_back(ui);
  }
  if (!(r.front() >= 0.0)) throw Error(ErrorKind::InvalidInput, "tabulated r values must be nonnegative");
  const double last = r.back();
  auto interp = std::make_shared<detail::MonotoneCubic>(std::move(r), std::move(u));
  return RadialPotential([interp, last](double x) { return x > last ? 0.0 : (*interp)(x); }, last,
                         "tabulated");
}

/// Reads a two-column CSV (r,U), with an optional header row.
inline RadialPotential load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open tabulated potential '" + path + "'");
  std::vector<std::pair<double, double>> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorKind::InvalidInput, path + ":" + std::to_string(line_no) + ": expected two columns");
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    char* end_a = nullptr;
    char* end_b = nullptr;
    const double r = std::strtod(a.c_str(), &end_a);
    const double u = std::strtod(b.c_str(), &end_b);
    const bool numeric = end_a != a.c_str() && end_b != b.c_str() &&
                         std::string(end_a).find_first_not_of(" \t") == std::string::npos &&
                         std::string(end_b).find_first_not_of(" \t") == std::string::npos;
    if (!numeric) {
      if (samples.empty() && line_no == 1) continue;  // header
      throw Error(ErrorKind::InvalidInput, path + ":" + std::to_string(line_no) + ": non-numeric value");
    }
    samples.emplace_back(r, u);
  }
  return make_tabulated(samples);
}

}  // namespace scatter2d
