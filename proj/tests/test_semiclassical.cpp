#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "scatter2d/quantum.hpp"
#include "scatter2d/semiclassical.hpp"

using namespace scatter2d;

TEST(Wkb, FreeParticleIsZero) {
  const auto z = make_zero();
  for (int m = 0; m <= 20; ++m) EXPECT_LT(std::abs(wkb_phase_shift(z, 1.0, m)), 1e-12) << m;
}

TEST(Wkb, CloseToQuantumAtHighEnergy) {
  const auto g = make_gaussian(-0.5, 1.0);
  const double k = 6.0;
  const auto s = make_setup(g, k);
  const auto q = quantum_phase_shifts(g, s);
  const auto w = wkb_phase_shifts(g, k, s.m_max);
  const auto aligned = align_branches(q.deltas, w.deltas);
  for (int m = 0; m <= s.m_max; ++m) EXPECT_NEAR(aligned[m], w.deltas[m], 1e-3) << m;
}

TEST(Wkb, WavefunctionRejectsForbiddenRegion) {
  const auto g = make_gaussian(1.0, 1.0);
  const double r0 = turning_point(g, 1.0, 2.0);
  EXPECT_THROW(wkb_wavefunction(g, 1.0, 2.0, {0.5 * r0, 2.0 * r0}), Error);
  const auto psi = wkb_wavefunction(g, 1.0, 2.0, {1.5 * r0, 2.0 * r0, 3.0 * r0});
  for (double v : psi) EXPECT_LE(std::abs(v), 1.0 / std::sqrt(std::sqrt(classical_F(g, 1.0, 2.0, 1.5 * r0))) + 1e-12);
}

TEST(Wkb, DerivativeIsDeflection) {
  const auto g = make_gaussian(0.5, 1.0);
  for (double m : {1.0, 3.0, 6.0}) EXPECT_NEAR(deflection_from_wkb(g, 5.0, m), deflection(g, 5.0, m / 5.0), 1e-6);
}

TEST(AlignBranches, RemovesPiJumps) {
  const std::vector<double> ref{3.5, 2.0, 0.5, 0.1};
  const std::vector<double> principal{3.5 - std::numbers::pi, 2.0 - std::numbers::pi, 0.5, 0.1};
  const auto out = align_branches(principal, ref);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(out[i], ref[i], 1e-12);
}

TEST(Eikonal, GaussianClosedForm) {
  const double U0 = 0.8, a = 1.3, k = 2.0;
  const auto g = make_gaussian(U0, a);
  for (double b = 0.0; b <= 5.0 * a; b += 0.25 * a) {
    const double exact = -U0 * a * std::sqrt(std::numbers::pi) / (4.0 * k) * std::exp(-b * b / (a * a));
    EXPECT_NEAR(eikonal_phase(g, k, b), exact, 1e-10) << b;
  }
}

TEST(Eikonal, AmplitudeTracksQuantumAtSmallAngles) {
  const auto g = make_gaussian(-1.0, 1.0);
  const double k = 10.0;
  const auto q = quantum_phase_shifts(g, make_setup(g, k, 250));
  const EikonalProfile prof(g, k, 1.5 * g.r_range(), 0.3);
  for (double th : {0.0, 0.1, 0.2}) {
    const auto fq = amplitude(q, th), fe = prof.amplitude(th);
    EXPECT_LT(std::abs(fe - fq) / std::abs(fq), 0.02) << th;
  }
  EXPECT_LT(prof.truncation_estimate(), 1e-8);
}

TEST(StationaryPhase, SingleBranchMatchesClassical) {
  // barrier above the energy: Theta falls monotonically from pi to 0
  const auto g = make_gaussian(2.0, 1.0);
  const double k = 1.0, theta = 1.5;
  const auto curve = deflection_curve(g, k, numerics::linspace(0.0, 6.0, 601));
  const auto set = stationary_points(curve, theta);
  ASSERT_EQ(set.branches.size(), 1u);
  const double spa = std::norm(spa_amplitude(set, g, k)) / k;
  const double cl = classical_dcs_2d(curve, theta).value;
  EXPECT_NEAR(spa, cl, 1e-6 * cl);
}

TEST(StationaryPhase, CausticThrows) {
  StationaryBranch br{1.0, 0.5, 1, 1e-9, 0, -0.2};
  BranchSet set{0.2, {br}};
  try {
    spa_amplitude(set, [](double) { return 0.0; });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CausticProximity);
  }
}

TEST(TwoBranch, Formula) {
  const double v = two_branch_dcs(1.0, 0.5, 0.25, -1.0, 0.1, 0.3, 2.0, 0.7);
  EXPECT_NEAR(v, 1.25 + 2.0 * 0.5 * std::sin(2.0 * 0.5 * 0.7 + 2.0 * (0.1 - 0.3)), 1e-15);
  EXPECT_THROW(two_branch_dcs(1.0, 1.0, 1, 1, 0, 0, 1, 0.1), Error);
}

TEST(Rainbow, AttractiveGaussian) {
  const auto g = make_gaussian(-0.5, 1.0);
  const auto info = find_rainbow(g, 3.0, 0.05, 4.0);
  EXPECT_NEAR(info.b_r, 0.72789, 1e-4);
  EXPECT_LT(std::abs(info.slope_at_b_r), 1e-6);
  EXPECT_TRUE(std::isfinite(airy_amplitude_dcs(info, 3.0, info.theta_r).value));
  EXPECT_FALSE(airy_amplitude_dcs(info, 3.0, info.theta_r).outside_window);
  EXPECT_TRUE(airy_amplitude_dcs(info, 3.0, 2.0 * info.theta_r).outside_window);
}

TEST(Rainbow, MonotoneCurveHasNone) {
  try {
    find_rainbow(make_gaussian(2.0, 1.0), 1.0, 0.1, 5.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoExtremum);
  }
}

TEST(Rainbow, DarkSideAsymptoteConverges) {
  const auto info = find_rainbow(make_gaussian(-0.5, 1.0), 3.0, 0.05, 4.0);
  const double scale = std::cbrt(info.theta_bb(3.0)) / (std::cbrt(2.0) * std::cbrt(9.0));
  double prev = 1.0;
  for (double x : {2.0, 3.0, 4.0, 6.0}) {
    const double th = info.theta_r + x * scale;
    EXPECT_NEAR(airy_argument(info, 3.0, th), x, 1e-12);
    const double rel = std::abs(airy_dark_side(info, 3.0, th) / airy_amplitude_dcs(info, 3.0, th).value - 1.0);
    EXPECT_LT(rel, prev);
    prev = rel;
  }
}

TEST(Rainbow, PeriodsAgree) {
  const auto info = find_rainbow(make_gaussian(-0.5, 1.0), 3.0, 0.05, 4.0);
  for (double dt : {0.01, 0.1, 0.5}) {
    const auto p = rainbow_periods(info, 3.0, info.theta_r - dt);
    EXPECT_NEAR(p.local_period, p.uniform_period, 1e-12 * p.uniform_period);
  }
}
