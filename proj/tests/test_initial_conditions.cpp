#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "esav/initial_conditions.hpp"
#include "esav/spectral.hpp"

using namespace esav;
using std::numbers::pi;

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, UniformRange) {
  SplitMix64 rng(42);
  double lo = 1, hi = -1, sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, -1.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_LT(lo, -0.999);
  EXPECT_GT(hi, 0.999);
  EXPECT_NEAR(sum / n, 0.0, 0.01);
}

TEST(InitialConditions, SineProduct) {
  const Grid g = Grid::square(128);
  const auto d = initial_condition("sine-product", g, 1);
  // node 32 sits at pi/2
  EXPECT_NEAR(d.phi(32, 32), 0.05, 1e-16);
  EXPECT_FALSE(d.rho.has_value());
}

TEST(InitialConditions, BubbleCentre) {
  const double eps = 0.01, r0 = 0.19;
  const Grid g(10, 10, 1.0, 1.0);  // (0.3, 0.5) is node (3, 5)
  const auto d = initial_condition("two-bubbles", g, 1, eps);
  const double want = 1 + std::tanh(r0 / (std::sqrt(2.0) * eps)) - std::tanh((0.4 - r0) / (std::sqrt(2.0) * eps));
  EXPECT_NEAR(d.phi(3, 5), want, 1e-14);
  EXPECT_NEAR(d.phi(7, 5), want, 1e-14);
  // far corner is outside both bubbles
  EXPECT_LT(d.phi(0, 0), -0.99);
}

TEST(InitialConditions, Deterministic) {
  const Grid g = Grid::square(32);
  for (const auto& id : initial_condition_ids()) {
    const auto a = initial_condition(id, g, 123), b = initial_condition(id, g, 123);
    EXPECT_TRUE((a.phi == b.phi).all()) << id;
    EXPECT_EQ(a.rho.has_value(), b.rho.has_value());
    if (a.rho) EXPECT_TRUE((*a.rho == *b.rho).all()) << id;
  }
  const auto c = initial_condition("random-spinodal", g, 124);
  EXPECT_FALSE((c.phi == initial_condition("random-spinodal", g, 123).phi).all());
}

TEST(InitialConditions, RandomFieldsRowMajor) {
  const Grid g = Grid::square(8);
  SplitMix64 rng(9);
  const Field u = uniform_field(g, rng);
  SplitMix64 again(9);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) EXPECT_EQ(u(i, j), again.uniform());
}

TEST(InitialConditions, RandomRanges) {
  const Grid g = Grid::square(64);
  const auto sp = initial_condition("random-spinodal", g, 3);
  EXPECT_GE(sp.phi.minCoeff(), 0.25 - 0.4);
  EXPECT_LE(sp.phi.maxCoeff(), 0.25 + 0.4);
  const auto cr = initial_condition("random-crystal", g, 3);
  EXPECT_NEAR(cr.phi.mean(), 0.07, 1e-15);
  const auto su = initial_condition("surfactant-random", g, 3);
  EXPECT_LE(su.phi.abs().maxCoeff(), 0.001);
  EXPECT_NEAR(su.rho->mean(), 0.2, 1e-4);
  EXPECT_LE((*su.rho - 0.2).abs().maxCoeff(), 0.001);
}

TEST(InitialConditions, SurfactantModes) {
  const Grid g = Grid::square(16);
  const auto d = initial_condition("surfactant-modes", g, 1);
  const double x = g.x(3), y = g.y(5);
  EXPECT_NEAR(d.phi(3, 5), 0.3 * std::cos(3 * x) + 0.5 * std::cos(y), 1e-15);
  EXPECT_NEAR((*d.rho)(3, 5), 0.2 * std::cos(2 * x) + 0.25 * std::sin(y), 1e-15);
}

TEST(InitialConditions, Crystallites) {
  const Grid g(64, 64, 400.0, 400.0);
  const auto d = initial_condition("crystallites", g, 1);
  // (0, 0) lies outside every patch
  EXPECT_EQ(d.phi(0, 0), 0.285);
  // patch 2 at (200, 250) with theta = 0: x_l = y, y_l = -x
  const CrystalLattice lat;
  const double x = g.x(32), y = g.y(40);
  ASSERT_EQ(x, 200.0);
  ASSERT_EQ(y, 250.0);
  const double xl = y, yl = -x;
  const double want = lat.mean + lat.amplitude * (std::cos(lat.q * yl / std::sqrt(3.0)) * std::cos(lat.q * xl) -
                                                  0.5 * std::cos(2 * lat.q * yl / std::sqrt(3.0)));
  EXPECT_NEAR(d.phi(32, 40), want, 1e-12);
  EXPECT_EQ(default_crystal_patches().size(), 3u);
}

TEST(InitialConditions, UnknownId) { EXPECT_THROW(initial_condition("three-bubbles", Grid::square(8), 1), InvalidArgument); }
