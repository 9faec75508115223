#include "gentropy/legendre.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace gentropy {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(LegendreDual, SubgaussianClosedForm) {
  for (double sigma2 : {0.5, 1.0, 2.0}) {
    const CgfEnvelope env = CgfEnvelope::subgaussian(sigma2);
    for (int i = 0; i <= 100; ++i) {
      const double gamma = 10.0 * i / 100.0;
      EXPECT_NEAR(legendre_dual(env, gamma), gamma * gamma / (2.0 * sigma2),
                  1e-6)
          << "sigma2=" << sigma2 << " gamma=" << gamma;
    }
  }
}

TEST(LegendreDual, ChiSquareClosedForm) {
  for (double sigma2 : {0.5, 1.0, 2.0}) {
    const double sigma = std::sqrt(sigma2);
    const CgfEnvelope env = CgfEnvelope::chi_square(sigma2);
    for (int i = 0; i <= 100; ++i) {
      const double gamma = 10.0 * i / 100.0;
      const double root = std::sqrt(2.0 * gamma + sigma2) - sigma;
      EXPECT_NEAR(legendre_dual(env, gamma), root * root / (4.0 * sigma2),
                  1e-6)
          << "sigma2=" << sigma2 << " gamma=" << gamma;
    }
  }
}

TEST(LegendreDual, ZeroAtZeroForCenteredEnvelopes) {
  EXPECT_NEAR(legendre_dual(CgfEnvelope::subgaussian(1.0), 0.0), 0.0, 1e-12);
  EXPECT_NEAR(legendre_dual(CgfEnvelope::chi_square(1.0), 0.0), 0.0, 1e-12);
}

TEST(LegendreDual, DivergesAboveLinearEnvelopes) {
  // phi linear with slope c: the dual is +inf for gamma > c.
  CgfEnvelope env;
  env.phi = [](double l) { return 2.0 * l; };
  env.b = kInf;
  EXPECT_EQ(legendre_dual(env, 3.0), kInf);
  EXPECT_NEAR(legendre_dual(env, 1.0), 0.0, 1e-9);
}

TEST(GeneralizedInverse, SubgaussianClosedForm) {
  for (double sigma2 : {1.0, 2.0}) {
    const CgfEnvelope env = CgfEnvelope::subgaussian(sigma2);
    for (int i = 0; i <= 100; ++i) {
      const double x = 10.0 * i / 100.0;
      EXPECT_NEAR(generalized_inverse(env, x), std::sqrt(2.0 * sigma2 * x),
                  1e-6);
    }
  }
}

TEST(GeneralizedInverse, ChiSquareClosedForm) {
  for (double sigma2 : {1.0, 2.0}) {
    const CgfEnvelope env = CgfEnvelope::chi_square(sigma2);
    for (int i = 0; i <= 100; ++i) {
      const double x = 10.0 * i / 100.0;
      EXPECT_NEAR(generalized_inverse(env, x),
                  2.0 * sigma2 * (std::sqrt(x) + x), 1e-6);
    }
  }
}

TEST(GeneralizedInverse, LimitsAndEdgeCases) {
  const CgfEnvelope env = CgfEnvelope::subgaussian(1.0);
  EXPECT_NEAR(generalized_inverse(env, 0.0), 0.0, 1e-9);
  EXPECT_NEAR(generalized_inverse(env, 0.5), 1.0, 1e-7);
  EXPECT_EQ(kl_bound_from_cgf(env, kInf), kInf);
  EXPECT_THROW(kl_bound_from_cgf(env, -0.1), std::invalid_argument);
  EXPECT_NEAR(kl_bound_from_cgf(CgfEnvelope::subgaussian(2.0), 1.0), 2.0,
              1e-7);

  // phi = +inf off the origin collapses the dual to 0 everywhere, so the
  // sup-inverse is +inf at any x >= 0.
  CgfEnvelope degenerate;
  degenerate.phi = [](double l) { return l == 0.0 ? 0.0 : kInf; };
  degenerate.b = kInf;
  EXPECT_EQ(generalized_inverse(degenerate, 0.5), kInf);

  // phi linear with slope 1: the dual is 0 up to gamma = 1 and +inf past
  // it, so the sup-inverse pins at 1 for any finite x.
  CgfEnvelope linear;
  linear.phi = [](double l) { return l; };
  linear.b = kInf;
  EXPECT_NEAR(generalized_inverse(linear, 0.5), 1.0, 1e-9);
}

TEST(GeneralizedInverse, MonotoneAndRoundTrip) {
  const CgfEnvelope env = CgfEnvelope::chi_square(1.5);
  double prev = -1.0;
  for (int i = 0; i <= 60; ++i) {
    const double x = 6.0 * i / 60.0;
    const double inv = generalized_inverse(env, x);
    EXPECT_GE(inv, prev - 1e-9);
    prev = inv;
    EXPECT_LE(legendre_dual(env, inv), x + 1e-8);
  }
}

TEST(Envelope, PresetValidation) {
  EXPECT_THROW(CgfEnvelope::subgaussian(-1.0), std::invalid_argument);
  EXPECT_THROW(CgfEnvelope::chi_square(0.0), std::invalid_argument);
}

TEST(Envelope, NamedPresets) {
  const CgfEnvelope subg = CgfEnvelope::from_preset("subgaussian:2");
  EXPECT_NEAR(generalized_inverse(subg, 1.0), 2.0, 1e-7);
  const CgfEnvelope chi = CgfEnvelope::from_preset("chi-square:1");
  EXPECT_NEAR(generalized_inverse(chi, 0.125), 0.9571067811865476, 1e-6);
  EXPECT_THROW(CgfEnvelope::from_preset("nope:1"), std::invalid_argument);
  EXPECT_THROW(CgfEnvelope::from_preset("subgaussian"),
               std::invalid_argument);
}

TEST(Envelope, TableInterpolation) {
  // Knots sampled from the sigma2 = 1 quadratic; chords over a convex
  // curve stay above it, so duals can only shrink and inverses grow.
  std::vector<std::pair<double, double>> knots;
  for (int i = 0; i <= 200; ++i) {
    const double l = 20.0 * i / 200.0;
    knots.emplace_back(l, 0.5 * l * l);
  }
  const CgfEnvelope table = CgfEnvelope::from_table(knots);
  const CgfEnvelope exact = CgfEnvelope::subgaussian(1.0);
  for (double x : {0.1, 0.5, 1.0, 4.0}) {
    EXPECT_GE(generalized_inverse(table, x) + 1e-9,
              generalized_inverse(exact, x));
    EXPECT_NEAR(generalized_inverse(table, x),
                generalized_inverse(exact, x), 0.05);
  }
  EXPECT_THROW(CgfEnvelope::from_table({{0.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(CgfEnvelope::from_table({{0.5, 0.1}, {1.0, 0.3}}),
               std::invalid_argument);
}

}  // namespace
}  // namespace gentropy
