#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "scatter2d/specfun.hpp"

using namespace scatter2d;
using namespace scatter2d::specfun;

// Reference values from arbitrary-precision evaluation.
constexpr double kJ0At1 = 0.765197686557966551449717526103;
constexpr double kAi0 = 0.355028053887817239260063186004;
constexpr double kAiAt8 = 4.69220761609923162564908170349e-8;
constexpr double kAiAtMinus8 = -0.0527050503563862026220826757939;
constexpr double kY0At100 = -0.0772443133650831522542282213672;
constexpr double kJ5At50 = -0.0814002476965696396439740379282;
constexpr double kY5At50 = -0.078548413913081653386059371646;

TEST(BesselJ, ValuesAtOrigin) {
  EXPECT_EQ(bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(bessel_j(1, 0.0), 0.0);
  EXPECT_EQ(bessel_j(7, 0.0), 0.0);
}

TEST(BesselJ, SeriesOracle) {
  EXPECT_NEAR(bessel_j(0, 1.0), kJ0At1, 1e-15);
  EXPECT_NEAR(bessel_j(5, 50.0), kJ5At50, 1e-13);
}

TEST(BesselJ, RejectsNegativeArgumentAndOrder) {
  EXPECT_THROW(bessel_j(0, -1.0), Error);
  EXPECT_THROW(bessel_j(-1, 1.0), Error);
}

TEST(BesselJ, LargeArgumentIsFinite) {
  for (int m : {0, 1, 10, 100, 500}) {
    const double v = bessel_j(m, 1e4);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LT(std::abs(v), 0.01);
  }
}

TEST(BesselY, DomainErrorNearOrigin) {
  EXPECT_THROW(bessel_y(0, 0.0), Error);
  EXPECT_THROW(bessel_y(0, 1e-13), Error);
  EXPECT_LT(bessel_y(0, 1e-12), -10.0);
}

TEST(BesselY, MatchesLeadingAsymptoteAt100) {
  const double x = 100.0;
  const double leading = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x - std::numbers::pi / 4.0);
  EXPECT_NEAR(bessel_y(0, x), kY0At100, 1e-14);
  EXPECT_LT(std::abs(bessel_y(0, x) - leading) / std::abs(leading), 1e-3);
}

TEST(BesselY, WronskianAt50) {
  const double x = 50.0;
  const double w = bessel_j(6, x) * bessel_y(5, x) - bessel_j(5, x) * bessel_y(6, x);
  EXPECT_NEAR(w, 2.0 / (std::numbers::pi * x), 1e-10);
  EXPECT_NEAR(bessel_y(5, x), kY5At50, 1e-13);
}

TEST(Bessel, RecurrenceConsistency) {
  for (int m = 1; m <= 30; ++m)
    for (double x = 0.5; x <= 100.0; x *= 1.37) {
      const double lhs = bessel_j(m - 1, x) + bessel_j(m + 1, x);
      const double rhs = 2.0 * m / x * bessel_j(m, x);
      EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(std::abs(rhs), 1e-300) + 1e-15) << "m=" << m << " x=" << x;
    }
}

TEST(Bessel, WronskianOnGrid) {
  for (int m = 0; m <= 40; m += 5)
    for (double x = 1.0; x <= 100.0; x += 0.73) {
      const double w = bessel_j(m + 1, x) * bessel_y(m, x) - bessel_j(m, x) * bessel_y(m + 1, x);
      EXPECT_NEAR(w, 2.0 / (std::numbers::pi * x), 1e-9) << "m=" << m << " x=" << x;
    }
}

TEST(Bessel, PathsAgreeInCrossoverBand) {
  for (int m : {0, 1, 3}) {
    for (double x = kBesselSeriesLimit; x <= kBesselSeriesLimit + 4.0; x += 0.5) {
      EXPECT_NEAR(bessel_j(m, x, EvaluationPath::Series), bessel_j(m, x, EvaluationPath::Asymptotic), 1e-6);
      EXPECT_NEAR(bessel_y(m, x, EvaluationPath::Series), bessel_y(m, x, EvaluationPath::Asymptotic), 1e-6);
    }
  }
}

TEST(Airy, ValueAtZero) { EXPECT_NEAR(airy_ai(0.0), kAi0, 1e-15); }

TEST(Airy, Oracles) {
  EXPECT_NEAR(airy_ai(8.0) / kAiAt8, 1.0, 1e-12);
  EXPECT_NEAR(airy_ai(-8.0), kAiAtMinus8, 1e-13);
}

TEST(Airy, LeadingAsymptotes) {
  EXPECT_LT(std::abs(airy_ai(8.0) / airy_ai_leading(8.0) - 1.0), 0.01);
}

TEST(Airy, OscillatoryLeadingFormWithinNextOrder) {
  // the first omitted term is (5 / 72 zeta) cos(zeta + pi/4) times the envelope
  for (double x : {-8.0, -12.0, -20.0}) {
    const double zeta = 2.0 / 3.0 * std::pow(-x, 1.5);
    const double envelope = 1.0 / (std::sqrt(std::numbers::pi) * std::pow(-x, 0.25));
    EXPECT_LT(std::abs(airy_ai(x) - airy_ai_leading(x)), 1.1 * envelope * 5.0 / (72.0 * zeta)) << x;
  }
}

TEST(Airy, PathsAgreeAtCrossover) {
  for (double x : {-6.0, -5.5, 5.5, 6.0})
    EXPECT_NEAR(airy_ai(x, EvaluationPath::Series), airy_ai(x, EvaluationPath::Asymptotic), 1e-6);
}

TEST(Airy, DifferentialEquationResidual) {
  const double h = 1e-3;
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    const double d2 = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
    EXPECT_NEAR(d2, x * airy_ai(x), 1e-6) << "x=" << x;
  }
}

TEST(Airy, RejectsNonFinite) { EXPECT_THROW(airy_ai(std::nan("")), Error); }
