#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scatter2d/classical.hpp"
#include "trajectory_oracle.hpp"

using namespace scatter2d;

// Deflection reference values from arbitrary-precision quadrature.
struct DeflectionCase {
  double U0, k, b, theta;
};
constexpr DeflectionCase kCases[] = {
    {0.5, 1.0, 0.1, 0.1755216792022914},   {0.5, 1.0, 0.5, 0.4389480271368891},
    {0.5, 1.0, 1.0, 0.2996579708479802},   {0.5, 1.0, 2.0, 0.03116259383680186},
    {-2.0, 0.4, 0.5, -0.6688523282874437}, {-2.0, 0.4, 1.0, -1.411125632181798},
    {-2.0, 0.4, 1.5, -2.3763004833578},    {-2.0, 0.4, 2.5, -0.1333773734183055},
};

TEST(TurningPoint, Oracles) {
  EXPECT_NEAR(turning_point(make_gaussian(0.5, 1.0), 1.0, 0.5), 0.616373117392354527613, 1e-12);
  EXPECT_NEAR(turning_point(make_gaussian(-0.5, 1.0), 1.0, 2.0), 1.99055782414540809775, 1e-12);
}

TEST(TurningPoint, FreeParticleIsImpactParameter) {
  for (double b : {0.3, 1.0, 7.0}) EXPECT_NEAR(turning_point(make_zero(), 2.0, b), b, 1e-13 * b);
}

TEST(TurningPoint, AbsentForHeadOnAttraction) {
  try {
    turning_point(make_gaussian(-1.0, 1.0), 1.0, 0.0);
    FAIL() << "expected NoTurningPoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoTurningPoint);
  }
}

TEST(Deflection, QuadratureOracles) {
  for (const auto& c : kCases) {
    const auto g = make_gaussian(c.U0, 1.0);
    EXPECT_NEAR(deflection(g, c.k, c.b), c.theta, 1e-10) << "U0=" << c.U0 << " b=" << c.b;
  }
}

TEST(Deflection, OddInImpactParameter) {
  const auto g = make_gaussian(0.5, 1.0);
  EXPECT_DOUBLE_EQ(deflection(g, 1.0, -0.7), -deflection(g, 1.0, 0.7));
}

TEST(Deflection, HeadOn) {
  EXPECT_DOUBLE_EQ(deflection(make_gaussian(2.0, 1.0), 1.0, 0.0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(deflection(make_gaussian(-2.0, 1.0), 1.0, 0.0), 0.0);
}

TEST(Deflection, FreeParticleIsZero) {
  for (double b : {0.5, 1.0, 5.0}) EXPECT_LT(std::abs(deflection(make_zero(), 1.0, b)), 1e-10);
}

TEST(Deflection, RutherfordLimitOfCoulombCore) {
  // outside the core the orbit is pure Coulomb: Theta = 2 atan(A / (2 E b))
  const auto u = make_appendix_b({1.0, 1.0});
  for (double b : {1.0, 2.0, 5.0}) {
    if (turning_point(u, 1.0, b) < 1.0) continue;
    EXPECT_NEAR(deflection(u, 1.0, b), 2.0 * std::atan(1.0 / (2.0 * b)), 1e-9);
  }
}

TEST(Deflection, MatchesTrajectoryIntegration) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    const double k = 0.8 + 1.5 * unit(rng);
    const double U0 = (2.0 * unit(rng) - 1.0) * k * k;
    const double a = 0.5 + unit(rng);
    const double b = 2.0 * a * unit(rng) + 0.05;
    const auto g = make_gaussian(U0, a);
    EXPECT_NEAR(deflection(g, k, b), oracle::trajectory_deflection(g, k, b), 1e-6)
        << "U0=" << U0 << " a=" << a << " k=" << k << " b=" << b;
  }
}

TEST(DeflectionCurve, RecordsErrorsPerPoint) {
  const auto g = make_gaussian(0.5, 1.0);
  const auto c = deflection_curve(g, 1.0, {0.0, 0.5, 1.0});
  ASSERT_EQ(c.thetas_defl.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(c.valid(i));
  EXPECT_NEAR(c.thetas_defl[1], 0.4389480271368891, 1e-10);
  EXPECT_THROW(deflection_curve(g, 1.0, {1.0, 0.5}), Error);
}

TEST(ClassicalDcs, SingleBranchIsInverseSlope) {
  const auto g = make_gaussian(0.5, 1.0);
  const auto curve = deflection_curve(g, 1.0, numerics::linspace(0.0, 6.0, 301));
  const double theta = 0.2;
  const auto d = classical_dcs_2d(curve, theta);
  ASSERT_FALSE(d.no_classical_branch);
  double expected = 0.0;
  for (const auto& br : d.branches) {
    EXPECT_NEAR(std::abs(deflection(g, 1.0, br.b)), theta, 1e-10);
    expected += 1.0 / std::abs(br.dtheta_db);
  }
  EXPECT_NEAR(d.value, expected, 1e-12 * expected);
  EXPECT_EQ(d.branches.size(), 2u);  // both sides of the rainbow maximum
}

TEST(ClassicalDcs, DarkSideIsZero) {
  const auto g = make_gaussian(0.5, 1.0);
  const auto curve = deflection_curve(g, 1.0, numerics::linspace(0.0, 6.0, 301));
  const auto d = classical_dcs_2d(curve, 1.0);
  EXPECT_TRUE(d.no_classical_branch);
  EXPECT_EQ(d.value, 0.0);
  EXPECT_THROW(classical_dcs_2d(curve, 4.0), Error);
}

TEST(ClassicalTotal, TwiceMaxImpactParameter) {
  const auto g = make_gaussian(0.5, 1.0);
  const auto curve = deflection_curve(g, 1.0, numerics::linspace(0.0, 6.0, 11));
  EXPECT_DOUBLE_EQ(classical_total_2d(curve, 6.0), 12.0);
}

TEST(Orbiting, DoubleRootAndLogRatio) {
  const auto g = make_gaussian(-2.0, 1.0);
  const auto o = detect_orbiting(g, 0.4, numerics::linspace(0.1, 5.0, 50));
  ASSERT_TRUE(o.exists);
  EXPECT_NEAR(o.b0, 2.19507693354, 1e-9);
  EXPECT_NEAR(o.r0, 1.84446524175, 1e-9);
  EXPECT_LT(std::abs(o.F_at_r0), 1e-8);
  EXPECT_LT(std::abs(o.F_prime_at_r0), 1e-8);
  EXPECT_NEAR(o.log_coeff_below / o.log_coeff_above, 2.0, 0.4);
}

TEST(Orbiting, AbsentForRepulsion) {
  const auto o = detect_orbiting(make_gaussian(2.0, 1.0), 1.0, numerics::linspace(0.1, 5.0, 50));
  EXPECT_FALSE(o.exists);
}
