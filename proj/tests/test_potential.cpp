#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "scatter2d/potential.hpp"

using namespace scatter2d;

TEST(Zero, VanishesEverywhere) {
  const auto z = make_zero();
  for (double r : {0.0, 0.5, 10.0, 1e6}) EXPECT_EQ(z(r), 0.0);
}

TEST(Gaussian, ValueAndRange) {
  const auto g = make_gaussian(-0.5, 2.0);
  EXPECT_DOUBLE_EQ(g(0.0), -0.5);
  EXPECT_NEAR(g(2.0), -0.5 * std::exp(-1.0), 1e-15);
  EXPECT_LE(std::abs(g(g.r_range())), g.range_epsilon());
  EXPECT_GT(std::abs(g(0.99 * g.r_range())), g.range_epsilon());
}

TEST(Gaussian, AnalyticDerivative) {
  const auto g = make_gaussian(1.3, 0.7);
  for (double r : {0.1, 0.5, 1.2}) {
    const double h = 1e-6;
    EXPECT_NEAR(g.derivative(r), (g(r + h) - g(r - h)) / (2 * h), 1e-8);
  }
}

TEST(Gaussian, RejectsBadWidth) {
  EXPECT_THROW(make_gaussian(1.0, 0.0), Error);
  EXPECT_THROW(make_gaussian(1.0, -1.0), Error);
  EXPECT_THROW(make_gaussian(std::nan(""), 1.0), Error);
}

TEST(CoulombCore, ContinuousAtCoreRadius) {
  const AppendixBParams p{2.0, 1.5};
  const auto u = make_appendix_b(p);
  const double Rc = p.R_c;
  EXPECT_NEAR(u(Rc * (1 - 1e-12)), u(Rc * (1 + 1e-12)), 1e-10);
  EXPECT_NEAR(u.derivative(Rc * (1 - 1e-12)), u.derivative(Rc * (1 + 1e-12)), 1e-10);
  EXPECT_DOUBLE_EQ(u(0.0), appendix_b_rainbow_threshold(p));
  EXPECT_DOUBLE_EQ(u(10.0), 0.2);
}

TEST(CoulombCore, CoulombTailMetadata) {
  const auto u = make_appendix_b({1.0, 1.0});
  EXPECT_TRUE(u.slow_decay());
  EXPECT_EQ(u.coulomb_tail(), 1.0);
  EXPECT_EQ(u.tail_start(), 1.0);
  EXPECT_NEAR(u.truncation_estimate(), 1e-3, 1e-15);
}

TEST(Tabulated, InterpolatesAndIsMonotone) {
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i <= 20; ++i) {
    const double r = 0.25 * i;
    s.emplace_back(r, -std::exp(-r * r));
  }
  const auto t = make_tabulated(s);
  EXPECT_NEAR(t(1.1), -std::exp(-1.21), 2e-3);
  EXPECT_EQ(t(5.1), 0.0);
  EXPECT_DOUBLE_EQ(t.r_range(), 5.0);
  double prev = t(0.0);
  for (double r = 0.01; r <= 5.0; r += 0.01) {
    EXPECT_GE(t(r), prev - 1e-15);
    prev = t(r);
  }
}

TEST(Tabulated, RejectsBadTables) {
  EXPECT_THROW(make_tabulated({{0.0, 1.0}}), Error);
  EXPECT_THROW(make_tabulated({{0.0, 1.0}, {0.0, 2.0}}), Error);
  EXPECT_THROW(make_tabulated({{1.0, 1.0}, {0.5, 2.0}}), Error);
  EXPECT_THROW(make_tabulated({{0.0, 1.0}, {1.0, std::nan("")}}), Error);
}

TEST(Tabulated, CsvWithHeader) {
  const auto path = std::filesystem::temp_directory_path() / "scatter2d_tab_test.csv";
  {
    std::ofstream out(path);
    out << "r,U\n0,-1\n1,-0.5\n2,0\n";
  }
  const auto t = load_tabulated_csv(path.string());
  EXPECT_DOUBLE_EQ(t(1.0), -0.5);
  {
    std::ofstream out(path);
    out << "r,U\n0,-1\n1,abc\n";
  }
  EXPECT_THROW(load_tabulated_csv(path.string()), Error);
  std::filesystem::remove(path);
  EXPECT_THROW(load_tabulated_csv(path.string()), Error);
}
