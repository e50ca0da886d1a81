#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "henon/manifolds.hpp"

using namespace henon;

namespace {

MapFamily reference() { return make_henon(0.1, 2.0); }
constexpr double kDelta = 0.1, kBeta = 0.1;

double angle_to(Point2 v, Point2 dir) {
  const double c = std::abs(dot(v, dir)) / (euclid_norm(v) * euclid_norm(dir));
  return std::acos(std::min(1.0, c));
}

struct Traces {
  ManifoldCurve sp, sm, up, um;
};

const Traces& traces() {
  static const Traces t = [] {
    const MapFamily m = reference();
    return Traces{trace_manifold(m, ManifoldKind::Stable, Branch::Plus, 20.0, 0.002),
                  trace_manifold(m, ManifoldKind::Stable, Branch::Minus, 20.0, 0.002),
                  trace_manifold(m, ManifoldKind::Unstable, Branch::Plus, 10.0, 0.002),
                  trace_manifold(m, ManifoldKind::Unstable, Branch::Minus, 10.0, 0.002)};
  }();
  return t;
}

}  // namespace

TEST(Saddle, ReferenceEigenvectors) {
  const SaddleInfo s = saddle_at_origin(reference());
  EXPECT_NEAR(s.lambda_s, -0.004987562112089027, 1e-12);
  EXPECT_NEAR(s.lambda_u, 2.004987562112089, 1e-12);
  EXPECT_NEAR(s.v_s.x / s.v_s.y, -0.0498756211208903, 1e-9);
  EXPECT_NEAR(s.v_u.y / s.v_u.x, 0.0498756211208903, 1e-9);
}

TEST(Saddle, RepellingOriginRejected) {
  EXPECT_THROW(saddle_at_origin(make_henon(2.5, 1.5)), DynamicsPrecondition);
  EXPECT_THROW(trace_manifold(make_henon(2.5, 1.5), ManifoldKind::Stable, Branch::Plus, 1.0, 0.01),
               DynamicsPrecondition);
}

TEST(LocalSegment, TangentToEigenvectors) {
  const MapFamily m = reference();
  const SaddleInfo s = saddle_at_origin(m);
  for (auto kind : {ManifoldKind::Stable, ManifoldKind::Unstable}) {
    const auto [plus, minus] = local_segment(m, kind, 1e-3);
    const Point2 v = kind == ManifoldKind::Stable ? s.v_s : s.v_u;
    for (const ManifoldCurve* c : {&plus, &minus}) {
      ASSERT_GE(c->points.size(), 2u);
      EXPECT_LT(angle_to(c->points[1] - c->points[0], v), 1e-3);
      EXPECT_NEAR(c->length(), 1e-3, 1e-4);
    }
    EXPECT_GT(dot(plus.points.back(), v), 0.0);
    EXPECT_LT(dot(minus.points.back(), v), 0.0);
  }
}

TEST(LocalSegment, SmallDeltaAlignsWithXAxis) {
  const auto [plus, minus] = local_segment(make_henon(1e-4, 2.0), ManifoldKind::Unstable, 1e-3);
  EXPECT_LT(angle_to(plus.points.back() - plus.points.front(), {1.0, 0.0}), 1e-3);
}

TEST(TraceManifold, TargetAtArmLengthReturnsLocalSegment) {
  const MapFamily m = reference();
  const auto [plus, minus] = local_segment(m, ManifoldKind::Stable, 1e-3);
  const ManifoldCurve t = trace_manifold(m, ManifoldKind::Stable, Branch::Minus, 1e-3, 1e-4);
  EXPECT_EQ(t.points, minus.points);
  EXPECT_EQ(t.stop, TraceStop::LocalOnly);
}

TEST(TraceManifold, ReachesTargetWithSpacing) {
  const Traces& t = traces();
  for (const ManifoldCurve* c : {&t.sp, &t.sm}) {
    EXPECT_GE(c->length(), 6.0);
    for (std::size_t k = 1; k < c->points.size(); ++k)
      ASSERT_LE(euclid_dist(c->points[k - 1], c->points[k]), 0.002 * (1.0 + 1e-9));
    EXPECT_TRUE(is_simple(c->points));
  }
}

TEST(TraceManifold, StableBranchInStripLiesInBetaWedge) {
  // The arc leaving the origin upward stays in -beta y < x < 0 across the strip.
  const ManifoldCurve& c = traces().sp;
  ASSERT_GT(c.points[1].y, 0.0);
  int checked = 0;
  for (std::size_t k = 1; k < c.points.size() && c.points[k].y <= 2.0 * kDelta; ++k, ++checked) {
    const Point2 p = c.points[k];
    ASSERT_LT(-kBeta * p.y, p.x) << k;
    ASSERT_LT(p.x, 0.0) << k;
  }
  EXPECT_GT(checked, 50);
}

TEST(TraceManifold, KSideUnstableBranchStaysBounded) {
  const Traces& t = traces();
  const MapFamily m = reference();
  const OrbitBudget b = OrbitBudget::defaults_for(kDelta);
  const ManifoldCurve& k = classify_forward(m, t.up.points.back(), b).kind == FateKind::ToAlpha ? t.up : t.um;
  for (const Point2& p : k.points) ASSERT_LE(max_norm(p), b.escape_norm);
}

TEST(TraceManifold, InvariantUnderTheMap) {
  const Traces& t = traces();
  const MapFamily m = reference();
  const std::vector<ManifoldCurve> stable{t.sp, t.sm}, unstable{t.up, t.um};
  for (const ManifoldCurve* c : {&t.sp, &t.sm})
    for (std::size_t k = 1; k < c->points.size(); k += 7)
      ASSERT_LE(distance_to_polylines(m.forward(c->points[k]), stable), 2.0 * c->max_spacing);
  for (const ManifoldCurve* c : {&t.up, &t.um})
    for (std::size_t k = 1; k < c->points.size(); k += 7)
      ASSERT_LE(distance_to_polylines(m.inverse(c->points[k]), unstable), 2.0 * c->max_spacing);
}

TEST(TraceManifold, StableSamplesConvergeForwardAndEscapeBackward) {
  const Traces& t = traces();
  const MapFamily m = reference();
  const OrbitBudget b = OrbitBudget::defaults_for(kDelta);
  std::mt19937_64 rng(21);
  for (int s = 0; s < 100; ++s) {
    const ManifoldCurve& c = s % 2 == 0 ? t.sp : t.sm;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, c.points.size() - 1)(rng);
    ASSERT_EQ(classify_forward(m, c.points[k], b).kind, FateKind::ToOrigin) << k;
    ASSERT_EQ(classify_backward(m, c.points[k], b).kind, FateKind::ToInfinity) << k;
  }
}

TEST(TraceManifold, CurveCsv) {
  ManifoldCurve c;
  c.points = {{0.0, 0.0}, {3.0, 4.0}};
  c.arclength = cumulative_arclength(c.points);
  std::ostringstream s;
  write_curve_csv(s, c);
  EXPECT_EQ(s.str(), "s,x,y\n0,0,0\n5,3,4\n");
}

TEST(TraceManifold, InvalidArgumentsRejected) {
  EXPECT_THROW(trace_manifold(reference(), ManifoldKind::Stable, Branch::Plus, 1.0, 0.0), InvalidArgument);
  EXPECT_THROW(trace_manifold(reference(), ManifoldKind::Stable, Branch::Plus, -1.0, 0.01), InvalidArgument);
}

TEST(IsSimple, DetectsSelfIntersection) {
  const std::vector<Point2> bowtie{{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
  EXPECT_FALSE(is_simple(bowtie));
  const std::vector<Point2> zigzag{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}};
  EXPECT_TRUE(is_simple(zigzag));
}

TEST(Crossing, LeftAtZeroIsOrigin) {
  const CrossingSolution s = xbar_left(reference(), 0.0);
  EXPECT_EQ(s.xbar, 0.0);
  EXPECT_EQ(s.side, CrossingSide::LeftOfOrigin);
}

TEST(Crossing, LeftReferenceValue) {
  const MapFamily m = reference();
  const CrossingSolution s = xbar_left(m, 0.2);
  EXPECT_GT(s.xbar, -0.02);
  EXPECT_LT(s.xbar, 0.0);
  EXPECT_NEAR(s.xbar, -0.0098777948994, 1e-10);
  const OrbitBudget b = OrbitBudget::defaults_for(kDelta);
  EXPECT_EQ(classify_forward(m, {0.0, 0.2}, b).kind, FateKind::ToAlpha);
  EXPECT_EQ(classify_forward(m, {-0.02 - 1e-9, 0.2}, b).kind, FateKind::ToInfinity);
}

TEST(Crossing, RightReferenceValues) {
  const MapFamily m = reference();
  EXPECT_NEAR(xbar_right(m, 0.0).xbar, 1.0024814657104, 1e-10);
  EXPECT_NEAR(xbar_right(m, 0.2).xbar, 1.0123592618142, 1e-10);
  const OrbitBudget b = OrbitBudget::defaults_for(kDelta);
  EXPECT_EQ(classify_forward(m, {1.0, 0.0}, b).kind, FateKind::ToAlpha);
  EXPECT_EQ(classify_forward(m, {2.0, 0.0}, b).kind, FateKind::ToInfinity);
}

TEST(Crossing, UniqueTransitionAtTopOfStrip) {
  const MapFamily m = reference();
  const OrbitClassifier<MapFamily> cls(m, OrbitBudget::defaults_for(kDelta), Direction::Forward);
  int transitions = 0;
  FateKind prev = cls({1.0, 0.2}).kind;
  for (int i = 1; i <= 10000; ++i) {
    const FateKind k = cls({1.0 + i * 1e-4, 0.2}).kind;
    ASSERT_NE(k, FateKind::Undecided);
    if (k != prev) ++transitions;
    prev = k;
  }
  EXPECT_EQ(transitions, 1);
}

TEST(Crossing, OutOfStripRejected) {
  EXPECT_THROW(xbar_left(reference(), 0.3), InvalidArgument);
  EXPECT_THROW(xbar_right(reference(), -0.1), InvalidArgument);
}

TEST(Crossing, ConsistentWithStableTrace) {
  const Traces& t = traces();
  const MapFamily m = reference();
  const std::vector<ManifoldCurve> stable{t.sp, t.sm};
  for (int k = 0; k < 20; ++k) {
    const double yb = 2.0 * kDelta * k / 19.0;
    EXPECT_LE(distance_to_polylines({xbar_left(m, yb).xbar, yb}, stable), 2.0 * t.sp.max_spacing) << yb;
    EXPECT_LE(distance_to_polylines(m.forward({xbar_right(m, yb).xbar, yb}), stable), 2.0 * t.sp.max_spacing)
        << yb;
  }
}

TEST(Crossing, SmoothInYbar) {
  const MapFamily m = reference();
  constexpr int n = 50;
  const double h = 2.0 * kDelta / (n - 1);
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = xbar_left(m, k * h).xbar;
  double worst = 0.0;
  for (int k = 1; k + 1 < n; ++k) worst = std::max(worst, std::abs(x[k + 1] - 2.0 * x[k] + x[k - 1]) / (h * h));
  EXPECT_LT(worst, 1.0);
}

TEST(CurveC, EndpointsAndShape) {
  const MapFamily m = reference();
  const ManifoldCurve c = curve_C(m, 101);
  ASSERT_EQ(c.points.size(), 101u);
  EXPECT_LT(max_dist(c.points.front(), {xbar_right(m, 0.0).xbar, 0.0}), 1e-12);
  EXPECT_EQ(c.points.back(), (Point2{0.0, 0.0}));
  for (std::size_t k = 1; k + 1 < c.points.size(); ++k) EXPECT_LT(c.points[k].y, 0.0) << k;
}

TEST(CurveC, PointAtXMatchesSampledCurve) {
  const MapFamily m = reference();
  const ManifoldCurve c = curve_C(m, 21);
  for (std::size_t k = 1; k + 1 < c.points.size(); ++k) {
    const Point2 q = curve_C_point(m, c.points[k].x);
    EXPECT_NEAR(q.x, c.points[k].x, 1e-12);
    EXPECT_NEAR(q.y, c.points[k].y, 1e-9);
  }
}

TEST(CurveC, PrimePointFormula) {
  const MapFamily m = reference();
  const double x = xbar_left(m, kDelta).xbar;
  ASSERT_LT(x, 0.0);
  const Point2 pp = m.inverse({x, kDelta});
  EXPECT_NEAR(pp.x, 1.0, 1e-14);
  EXPECT_NEAR(pp.y, x / kDelta, 1e-12);
  EXPECT_LT(pp.y, 0.0);
}
