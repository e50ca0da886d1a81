#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "henon/maps.hpp"

using namespace henon;

namespace {

MapFamily reference() { return make_henon(0.1, 2.0); }

MapFamily general_reference() {
  return make_general(scalar_map_from_spec("logistic(2)"), scalar_map_from_spec("linear_plus_sine(0.1,0.001)"), 0.1);
}

void expect_point(Point2 got, Point2 want, double tol) {
  EXPECT_NEAR(got.x, want.x, tol);
  EXPECT_NEAR(got.y, want.y, tol);
}

}  // namespace

TEST(MakeHenon, H11Membership) {
  EXPECT_TRUE(make_henon(0.1, 2.0).h11_member());
  EXPECT_FALSE(make_henon(0.5, 2.5).h11_member());
}

TEST(MakeHenon, DegenerateParametersRejected) {
  EXPECT_THROW(make_henon(0.0, 2.0), InvalidArgument);
  EXPECT_THROW(make_henon(0.1, 0.0), InvalidArgument);
  EXPECT_THROW(make_henon(NAN, 2.0), InvalidArgument);
}

TEST(Apply, ReferenceValues) {
  const MapFamily m = reference();
  expect_point(*apply(m, {0.0, 0.0}), {0.0, 0.0}, 0.0);
  expect_point(*apply(m, {0.5, 0.0}), {0.5, 0.05}, 1e-15);
  expect_point(*apply(m, {1.0, 1.0}), {0.1, 0.1}, 1e-15);
}

TEST(Apply, OverflowGivesEmpty) {
  EXPECT_FALSE(apply(reference(), {1e200, 0.0}).has_value());
  EXPECT_FALSE(apply_inverse(reference(), {0.0, 1e200}).has_value());
}

TEST(ApplyInverse, ReferenceValues) {
  const MapFamily m = reference();
  expect_point(*apply_inverse(m, {0.0, 0.0}), {0.0, 0.0}, 0.0);
  expect_point(*apply_inverse(m, {0.5, 0.05}), {0.5, 0.0}, 1e-14);
  expect_point(*apply_inverse(m, *apply(m, {0.3, 0.7})), {0.3, 0.7}, 1e-10);
}

TEST(ApplyInverse, RoundTripProperty) {
  for (const MapFamily& m : {reference(), general_reference()}) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 10000; ++k) {
      const Point2 p{u(rng), u(rng)};
      const Point2 q = *apply_inverse(m, *apply(m, p));
      ASSERT_LE(max_dist(p, q), 1e-9 * std::max(1.0, max_norm(p))) << m.describe();
    }
  }
}

TEST(Jacobian, ReferenceValues) {
  const Matrix2 j0 = jacobian(reference(), {0.0, 0.0});
  EXPECT_DOUBLE_EQ(j0.a, 2.0);
  EXPECT_DOUBLE_EQ(j0.b, 0.1);
  EXPECT_DOUBLE_EQ(j0.c, 0.1);
  EXPECT_DOUBLE_EQ(j0.d, 0.0);
  EXPECT_DOUBLE_EQ(jacobian(reference(), {0.5, 17.0}).a, 0.0);
  const MapFamily g = make_general(logistic(2.0), linear(0.1), 0.1);
  const Matrix2 jg = jacobian(g, {0.0, 0.0});
  EXPECT_DOUBLE_EQ(jg.a, 2.0);
  EXPECT_DOUBLE_EQ(jg.b, 0.1);
  EXPECT_DOUBLE_EQ(jg.c, 0.1);
  EXPECT_DOUBLE_EQ(jg.d, 0.0);
}

TEST(Jacobian, MatchesCentralDifferences) {
  for (const MapFamily& m : {reference(), general_reference()}) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    constexpr double e = 1e-6;
    for (int k = 0; k < 100; ++k) {
      const Point2 p{u(rng), u(rng)};
      const Matrix2 j = jacobian(m, p);
      const Point2 dx = (0.5 / e) * (m.forward(p + Point2{e, 0.0}) - m.forward(p - Point2{e, 0.0}));
      const Point2 dy = (0.5 / e) * (m.forward(p + Point2{0.0, e}) - m.forward(p - Point2{0.0, e}));
      EXPECT_NEAR(j.a, dx.x, 1e-5);
      EXPECT_NEAR(j.c, dx.y, 1e-5);
      EXPECT_NEAR(j.b, dy.x, 1e-5);
      EXPECT_NEAR(j.d, dy.y, 1e-5);
    }
  }
}

TEST(Eigenvalues, OriginReference) {
  const Eigenvalues e = eigenvalues_at(reference(), {0.0, 0.0});
  EXPECT_NEAR(e.minus, -0.004987562112089027, 1e-12);
  EXPECT_NEAR(e.plus, 2.004987562112089027, 1e-12);
}

TEST(Eigenvalues, AgreeWithGenericSolver) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const MapFamily m = reference();
  for (int k = 0; k < 100; ++k) {
    const Point2 p{u(rng), u(rng)};
    const Eigenvalues closed = m.eigenvalues(p);
    const Eigenvalues generic = real_eigenvalues(m.jacobian(p));
    EXPECT_NEAR(closed.minus, generic.minus, 1e-9);
    EXPECT_NEAR(closed.plus, generic.plus, 1e-9);
  }
}

TEST(Eigenvalues, CriticalLine) {
  for (double d : {0.1, -0.3, 0.7}) {
    const Eigenvalues e = make_henon(d, 2.0).eigenvalues({0.5, 0.0});
    EXPECT_NEAR(e.minus, -std::abs(d), 1e-15);
    EXPECT_NEAR(e.plus, std::abs(d), 1e-15);
  }
}

TEST(Eigenvalues, AlphaReportedByBranch) {
  const MapFamily m = reference();
  const Point2 a = *m.alpha();
  EXPECT_NEAR(a.x, 0.505, 1e-15);
  EXPECT_NEAR(a.y, 0.0505, 1e-15);
  const Eigenvalues e = m.eigenvalues(a);
  EXPECT_NEAR(e.minus, -0.1104987562112089, 1e-12);
  EXPECT_NEAR(e.plus, 0.0904987562112089, 1e-12);
}

TEST(Eigenvalues, SignsForAnyX) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ud(-2.0, 2.0), um(0.1, 4.0), ux(-20.0, 20.0);
  for (int k = 0; k < 2000; ++k) {
    double d = 0.0;
    while (d == 0.0) d = ud(rng);
    const Eigenvalues e = make_henon(d, um(rng)).eigenvalues({ux(rng), 0.0});
    ASSERT_LT(e.minus, 0.0);
    ASSERT_GT(e.plus, 0.0);
  }
}

TEST(Eigenvalues, OriginThresholdsOnGrid) {
  for (int i = 1; i <= 40; ++i) {
    for (int j = 1; j <= 40; ++j) {
      const double d = -2.0 + 4.0 * i / 41.0, mu = 3.0 * j / 41.0;
      const double d2 = d * d;
      const Eigenvalues e = make_henon(d, mu).eigenvalues({0.0, 0.0});
      EXPECT_EQ(e.plus > 1.0, d2 > 1.0 - mu) << d << ' ' << mu;
      EXPECT_EQ(e.minus > -1.0, d2 < 1.0 + mu) << d << ' ' << mu;
    }
  }
}

TEST(Eigenvalues, AlphaAttractingThresholdOnGrid) {
  for (int i = 1; i <= 40; ++i) {
    for (int j = 1; j <= 40; ++j) {
      const double d = -1.0 + 2.0 * i / 41.0, mu = 1.0 + 2.0 * j / 41.0;
      const MapFamily m = make_henon(d, mu);
      const Eigenvalues e = m.eigenvalues(*m.alpha());
      const bool attracting = std::abs(e.minus) < 1.0 && std::abs(e.plus) < 1.0;
      EXPECT_EQ(attracting, mu < 3.0 * (1.0 - d * d)) << d << ' ' << mu;
    }
  }
}

TEST(Eigenvalues, LinearCoefficientAtAlpha) {
  // The (1,1) Jacobian entry at alpha is 2 - mu - 2 delta^2.
  for (double d : {0.05, 0.1, 0.3}) {
    for (double mu : {1.5, 2.0, 2.5}) {
      const MapFamily m = make_henon(d, mu);
      EXPECT_NEAR(m.jacobian(*m.alpha()).a, 2.0 - mu - 2.0 * d * d, 1e-14);
    }
  }
}

TEST(Conjugacy, FlipDefinition) {
  EXPECT_EQ(conjugate_flip({1.0, 2.0}), (Point2{1.0, -2.0}));
  EXPECT_EQ(conjugate_flip({3.0, 0.0}), (Point2{3.0, 0.0}));
}

TEST(Conjugacy, FlipConjugatesDeltaSign) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const MapFamily f = make_henon(0.3, 1.7), g = make_henon(-0.3, 1.7);
  for (int k = 0; k < 1000; ++k) {
    const Point2 p{u(rng), u(rng)};
    EXPECT_LT(max_dist(conjugate_flip(f.forward(p)), g.forward(conjugate_flip(p))), 1e-12);
  }
}

TEST(GeneralMap, MatchesHenonForLogisticAndLinear) {
  const MapFamily g = make_general(logistic(2.0), linear(0.1), 0.1);
  const MapFamily h = reference();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const Point2 p{u(rng), u(rng)};
    EXPECT_LT(max_dist(g.forward(p), h.forward(p)), 1e-14);
    EXPECT_LT(max_dist(g.inverse(p), h.inverse(p)), 1e-9);
  }
  EXPECT_LT(max_dist(*g.alpha(), *h.alpha()), 1e-12);
}

TEST(GeneralMap, HypothesisViolationsRejected) {
  const ScalarMap shifted{"shifted", [](double x) { return 0.1 * x + 1.0; }, [](double) { return 0.1; },
                          [](double) { return 0.0; }};
  EXPECT_THROW(make_general(logistic(2.0), shifted, 0.1), InvalidArgument);
  const ScalarMap decreasing{"decreasing", [](double x) { return -0.1 * x; }, [](double) { return -0.1; },
                             [](double) { return 0.0; }};
  EXPECT_THROW(make_general(logistic(2.0), decreasing, 0.1), InvalidArgument);
  EXPECT_THROW(make_general(logistic(2.0), linear(0.1), 0.0), InvalidArgument);
}

TEST(GeneralMap, DescribeNamesComponents) {
  EXPECT_EQ(general_reference().describe(), "general(g=logistic(2),h=linear_plus_sine(0.10000000000000001,0.001),delta=0.10000000000000001)");
  EXPECT_EQ(reference().describe(), "henon(delta=0.10000000000000001,mu=2)");
}
