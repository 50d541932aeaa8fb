#include <gtest/gtest.h>

#include "thinlayer/analytic.hpp"

using namespace thinlayer;

TEST(ParticularRadial, ConstantSource) {
  const auto p = particular_radial({4.0, 0, {0}}, 1.0);
  EXPECT_EQ(p.power, 2);
  EXPECT_DOUBLE_EQ(p.coef, -1.0);
}

TEST(ParticularRadial, LinearSource) {
  const auto p = particular_radial({3.0, 1, {0}}, 3.0);
  EXPECT_EQ(p.power, 3);
  EXPECT_DOUBLE_EQ(p.coef, -1.0 / 9.0);
}

TEST(ParticularRadial, ZeroCoefficient) {
  EXPECT_EQ(particular_radial({0.0, 3, {1}}, 2.0).coef, 0.0);
  ForcingSpec f{{0.0, 1, {2}}};
  EXPECT_TRUE(particular_for_mode(f, {2}, 1.0).empty());
}

TEST(ParticularRadial, SatisfiesRadialEquation) {
  // -alpha ((1/r)(r u')' - n^2 u / r^2) = c r^m, checked by central differences
  for (int n : {0, 1, 3, 5}) {
    for (int m : {0, 1, 2, 4}) {
      if (m + 2 == n) continue;
      const double alpha = 1.7;
      const double c = 2.5;
      const auto p = particular_radial({c, m, {n}}, alpha);
      const auto u = [&](double r) { return p.coef * std::pow(r, p.power); };
      const double r = 0.8;
      const double h = 1e-4;
      const double d2 = (u(r + h) - 2 * u(r) + u(r - h)) / (h * h);
      const double d1 = (u(r + h) - u(r - h)) / (2 * h);
      const double lhs = -alpha * (d2 + d1 / r - n * n * u(r) / (r * r));
      EXPECT_NEAR(lhs, c * std::pow(r, m), 1e-5) << "n=" << n << " m=" << m;
    }
  }
}

TEST(Forcing, RejectsResonantAndNegativePowers) {
  ForcingSpec f;
  EXPECT_THROW(f.add({1.0, 0, {2}}), ValidationError);
  EXPECT_THROW(f.add({1.0, -1, {0}}), ValidationError);
  EXPECT_THROW(f.add({1.0, 0, {0, Parity::sine}}), ValidationError);
  EXPECT_NO_THROW(f.add({1.0, 1, {2}}));
}

TEST(Forcing, MergesEqualPowers) {
  ForcingSpec f{{4.0, 0, {0}}, {4.0, 0, {0}}, {1.0, 1, {2, Parity::sine}}};
  const auto parts = particular_for_mode(f, {0}, 1.0);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_DOUBLE_EQ(parts[0].coef, -2.0);
  EXPECT_TRUE(particular_for_mode(f, {2}, 1.0).empty());
}

TEST(RadialPiece, Evaluation) {
  RadialPiece p;
  p.n = 2;
  p.a = 1.0;
  EXPECT_DOUBLE_EQ(eval_mode_solution(p, 3.0, 0), 9.0);
  EXPECT_DOUBLE_EQ(eval_mode_solution(p, 3.0, 1), 6.0);

  RadialPiece q;
  q.n = 0;
  q.a = 1.0;
  q.particular = {{-1.0, 2}};
  EXPECT_DOUBLE_EQ(eval_mode_solution(q, 0.5, 0), 0.75);
  EXPECT_DOUBLE_EQ(eval_mode_solution(q, 0.5, 1), -1.0);

  EXPECT_EQ(eval_mode_solution(RadialPiece{}, 0.3, 0), 0.0);
  EXPECT_THROW(eval_mode_solution(p, 1.0, 2), ValidationError);
}

TEST(RadialBasis, LogarithmicPartner) {
  EXPECT_DOUBLE_EQ(radial_basis(0, 1.0, 1, std::exp(1.0), 0), 1.0);
  EXPECT_DOUBLE_EQ(radial_basis(0, 1.0, 1, 2.0, 1), 0.5);
  EXPECT_DOUBLE_EQ(radial_basis(3, 2.0, 1, 1.0, 0), 8.0);
  EXPECT_DOUBLE_EQ(radial_basis(3, 2.0, 0, 1.0, 1), 3.0 * 0.125);
}

TEST(RadialBasis, FiniteDerivativeAtOrigin) {
  EXPECT_EQ(radial_basis(1, 1.0, 0, 0.0, 1), 1.0);
  EXPECT_EQ(radial_basis(2, 1.0, 0, 0.0, 1), 0.0);
}
