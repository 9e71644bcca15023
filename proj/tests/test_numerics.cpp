#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "scatter2d/numerics.hpp"

using namespace scatter2d;
using namespace scatter2d::numerics;

TEST(Integrate, PolynomialIsExact) {
  const auto r = integrate([](double x) { return x * x * x - 2.0 * x; }, 0.0, 2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 0.0, 1e-14);
}

TEST(Integrate, InverseSqrtEndpoint) {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10);
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Integrate, OscillatoryGaussian) {
  // integral of exp(-x^2) cos(3x) over the real line = sqrt(pi) exp(-9/4)
  const auto r = integrate([](double x) { return std::exp(-x * x) * std::cos(3.0 * x); }, -10.0, 10.0);
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi) * std::exp(-2.25), 1e-13);
}

TEST(GaussLegendre, IntegratesDegree2nMinus1) {
  const GaussLegendre rule(8);
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s += rule.weights[i] * std::pow(rule.nodes[i], 14);
    w += rule.weights[i];
  }
  EXPECT_NEAR(w, 2.0, 1e-14);
  EXPECT_NEAR(s, 2.0 / 15.0, 1e-14);
}

TEST(Bisect, FindsRootAndRejectsNonBracket) {
  EXPECT_NEAR(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), Error);
}

TEST(GoldenMinimize, Parabola) {
  const auto m = golden_minimize([](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, -1.0, 2.0, 1e-12);
  EXPECT_NEAR(m.x, 0.3, 1e-6);
  EXPECT_NEAR(m.value, 1.0, 1e-12);
}

TEST(Derivatives, RichardsonAccuracy) {
  EXPECT_NEAR(derivative([](double x) { return std::sin(x); }, 1.0, 1e-2), std::cos(1.0), 1e-10);
  EXPECT_NEAR(second_derivative([](double x) { return std::exp(x); }, 0.5, 1e-2), std::exp(0.5), 1e-9);
}

TEST(ParallelMap, OrderIndependentOfWorkers) {
  auto fn = [](std::size_t i) { return std::sin(static_cast<double>(i)); };
  const auto one = parallel_map(1000, fn, 1);
  const auto four = parallel_map(1000, fn, 4);
  EXPECT_EQ(one, four);
}

TEST(ParallelMap, PropagatesExceptions) {
  auto fn = [](std::size_t i) -> int {
    if (i == 7) throw Error(ErrorKind::NoConvergence, "boom");
    return static_cast<int>(i);
  };
  EXPECT_THROW(parallel_map(20, fn, 3), Error);
}

TEST(Grids, LinspaceAndMonotonicity) {
  const auto v = linspace(0.0, 1.0, 5);
  EXPECT_DOUBLE_EQ(v[2], 0.5);
  EXPECT_TRUE(strictly_increasing(v));
  const std::vector<double> bad{0.0, 1.0, 1.0};
  EXPECT_FALSE(strictly_increasing(bad));
}
