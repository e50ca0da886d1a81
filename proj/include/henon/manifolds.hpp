#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "henon/error.hpp"
#include "henon/fixed_points.hpp"
#include "henon/geometry.hpp"
#include "henon/io.hpp"
#include "henon/maps.hpp"
#include "henon/orbits.hpp"

namespace henon {

enum class ManifoldKind { Stable, Unstable };
/// Plus is the side of the origin the oriented eigenvector points to.
enum class Branch { Plus, Minus };

inline const char* to_string(ManifoldKind k) { return k == ManifoldKind::Stable ? "Stable" : "Unstable"; }
inline const char* to_string(Branch b) { return b == Branch::Plus ? "Plus" : "Minus"; }

enum class TraceStop {
  LocalOnly,  // no growth was requested
  Target,     // target arclength reached
  Window,     // the branch left the tracing window
  Saturated,  // the branch stopped growing (it accumulates on a fixed point)
};

inline const char* to_string(TraceStop s) {
  switch (s) {
    case TraceStop::LocalOnly: return "LocalOnly";
    case TraceStop::Target: return "Target";
    case TraceStop::Window: return "Window";
    case TraceStop::Saturated: return "Saturated";
  }
  return "?";
}

inline std::vector<double> cumulative_arclength(std::span<const Point2> pts) {
  std::vector<double> s(pts.size(), 0.0);
  for (std::size_t k = 1; k < pts.size(); ++k) s[k] = s[k - 1] + euclid_dist(pts[k - 1], pts[k]);
  return s;
}

struct ManifoldCurve {
  std::vector<Point2> points;
  ManifoldKind kind = ManifoldKind::Stable;
  Branch branch = Branch::Plus;
  std::vector<double> arclength;
  double max_spacing = 0.0;
  TraceStop stop = TraceStop::LocalOnly;
  int level = 0;  // number of double steps applied to the seed segment

  double length() const { return arclength.empty() ? 0.0 : arclength.back(); }
};

/// Curve export: header `s,x,y` with s the cumulative arclength.
inline void write_curve_csv(std::ostream& out, const ManifoldCurve& c) {
  out << "s,x,y\n";
  for (std::size_t k = 0; k < c.points.size(); ++k)
    out << format_real(c.arclength[k]) << ',' << format_real(c.points[k].x) << ',' << format_real(c.points[k].y)
        << '\n';
}

/// Saddle data at the origin: eigenvalues and oriented unit eigenvectors.
struct SaddleInfo {
  double lambda_s = 0.0, lambda_u = 0.0;
  Point2 v_s, v_u;
};

template <PlanarMap M>
SaddleInfo saddle_at_origin(const M& map) {
  const Point2 image = map.forward({0.0, 0.0});
  if (max_norm(image) > 1e-12) throw DynamicsPrecondition("the origin is not a fixed point of this map");
  const Eigenvalues e = map.eigenvalues({0.0, 0.0});
  if (!is_saddle(classify_stability(e))) throw DynamicsPrecondition("the origin is not a saddle for this map");
  const Matrix2 j = map.jacobian({0.0, 0.0});
  SaddleInfo s;
  const bool minus_stable = std::abs(e.minus) < 1.0;
  s.lambda_s = minus_stable ? e.minus : e.plus;
  s.lambda_u = minus_stable ? e.plus : e.minus;
  s.v_s = eigenvector(j, s.lambda_s);
  s.v_u = eigenvector(j, s.lambda_u);
  return s;
}

struct TraceOptions {
  Window window{-3.0, 4.0, -8.0, 8.0};
  double arm_length = 1e-3;
  double seed_cap = 1e-7;
  int max_levels = 200;
};

namespace detail {

/// A branch parametrized as t -> G^level(t v) with G = F^2 (unstable) or
/// F^-2 (stable), t >= 0. Refinement bisects in t, so every inserted node is
/// an exact image of a point on the linear seed segment.
template <PlanarMap M>
struct BranchParam {
  const M& map;
  ManifoldKind kind;
  Point2 dir;
  double rho;  // tangent growth per double step

  Point2 step(Point2 p) const {
    return kind == ManifoldKind::Unstable ? map.forward(map.forward(p)) : map.inverse(map.inverse(p));
  }
  Point2 eval(double t, int level) const {
    Point2 p = t * dir;
    for (int k = 0; k < level && is_finite(p); ++k) p = step(p);
    return p;
  }
};

struct Node {
  double t;
  Point2 p;
};

template <PlanarMap M>
BranchParam<M> make_param(const M& map, ManifoldKind kind, Branch branch) {
  const SaddleInfo s = saddle_at_origin(map);
  const double sign = branch == Branch::Plus ? 1.0 : -1.0;
  if (kind == ManifoldKind::Unstable) return {map, kind, sign * s.v_u, s.lambda_u * s.lambda_u};
  return {map, kind, sign * s.v_s, 1.0 / (s.lambda_s * s.lambda_s)};
}

struct WalkResult {
  std::vector<Node> nodes;
  double length = 0.0;
  std::optional<TraceStop> stop;
};

/// Walks the nodes in parameter order, inserting parameter midpoints until
/// consecutive images are at most max_spacing apart. Stops at the first node
/// outside the window or once the arclength reaches target. Nodes closer than
/// prune_tol to their predecessor are dropped.
template <PlanarMap M>
WalkResult refine_walk(const BranchParam<M>& bp, const std::vector<Node>& in, int level, double max_spacing,
                       const Window& window, double target) {
  WalkResult r;
  const double prune_tol = 1e-3 * max_spacing;
  r.nodes.push_back(in.front());
  std::vector<Node> stack;
  for (std::size_t i = 1; i < in.size(); ++i) {
    stack.assign(1, in[i]);
    while (!stack.empty()) {
      const Node a = r.nodes.back();
      const Node b = stack.back();
      const bool finite = is_finite(b.p);
      if (!finite || euclid_dist(a.p, b.p) > max_spacing) {
        const double tm = 0.5 * (a.t + b.t);
        if (tm == a.t || tm == b.t) {
          if (!finite || !window.contains(b.p)) {
            r.stop = TraceStop::Window;
            return r;
          }
          throw NumericFailure("manifold refinement exhausted parameter resolution");
        }
        stack.push_back({tm, bp.eval(tm, level)});
        continue;
      }
      stack.pop_back();
      if (!window.contains(b.p)) {
        r.stop = TraceStop::Window;
        return r;
      }
      const double d = euclid_dist(a.p, b.p);
      const bool last = i + 1 == in.size() && stack.empty();
      if (d < prune_tol && !last) continue;
      r.nodes.push_back(b);
      r.length += d;
      if (r.length >= target) {
        r.stop = TraceStop::Target;
        return r;
      }
    }
  }
  return r;
}

inline ManifoldCurve make_curve(const std::vector<Node>& nodes, ManifoldKind kind, Branch branch, double spacing,
                                TraceStop stop, int level) {
  ManifoldCurve c;
  c.kind = kind;
  c.branch = branch;
  c.max_spacing = spacing;
  c.stop = stop;
  c.level = level;
  c.points.reserve(nodes.size());
  for (const Node& n : nodes) c.points.push_back(n.p);
  c.arclength = cumulative_arclength(c.points);
  return c;
}

template <PlanarMap M>
std::pair<std::vector<Node>, int> local_nodes(const BranchParam<M>& bp, const TraceOptions& opt, double spacing) {
  // Seed offset: start at seed_cap, halve until the arm endpoint moves < 1e-9.
  double cap = opt.seed_cap;
  int level = 0;
  double s_hi = 0.0;
  std::optional<Point2> prev;
  for (int attempt = 0; attempt < 60; ++attempt) {
    int n = 0;
    double s = opt.arm_length;
    while (s > cap) {
      s /= bp.rho;
      ++n;
    }
    const Point2 end = bp.eval(s, n);
    const bool stable = prev && euclid_dist(end, *prev) < 1e-9;
    level = n;
    s_hi = s;
    if (stable) break;
    prev = end;
    cap *= 0.5;
  }
  const int k = std::max(16, static_cast<int>(std::ceil(opt.arm_length / spacing)));
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) {
    const double t = s_hi * i / k;
    nodes.push_back({t, bp.eval(t, level)});
  }
  return {nodes, level};
}

}  // namespace detail

/// Both branches of the local stable or unstable manifold of the origin, each
/// of arclength close to arm_length.
template <PlanarMap M>
std::pair<ManifoldCurve, ManifoldCurve> local_segment(const M& map, ManifoldKind kind, double arm_length,
                                                      TraceOptions opt = {}) {
  if (!(arm_length > 0.0)) throw InvalidArgument("arm_length must be positive");
  opt.arm_length = arm_length;
  const double spacing = arm_length / 16.0;
  auto one = [&](Branch b) {
    const auto bp = detail::make_param(map, kind, b);
    auto [nodes, level] = detail::local_nodes(bp, opt, spacing);
    return detail::make_curve(nodes, kind, b, spacing, TraceStop::LocalOnly, level);
  };
  return {one(Branch::Plus), one(Branch::Minus)};
}

/// One branch grown from its local segment by double steps of F (unstable)
/// or F^-1 (stable) until it reaches target_arclength, leaves the window, or
/// saturates. Throws NumericFailure when none happens within max_levels.
template <PlanarMap M>
ManifoldCurve trace_manifold(const M& map, ManifoldKind kind, Branch branch, double target_arclength,
                             double max_spacing, TraceOptions opt = {}) {
  if (!(max_spacing > 0.0)) throw InvalidArgument("max_spacing must be positive");
  if (!(target_arclength > 0.0)) throw InvalidArgument("target_arclength must be positive");
  const auto bp = detail::make_param(map, kind, branch);
  if (target_arclength <= opt.arm_length) {
    auto [lp, lm] = local_segment(map, kind, opt.arm_length, opt);
    return branch == Branch::Plus ? lp : lm;
  }

  auto [nodes, level] = detail::local_nodes(bp, opt, std::min(max_spacing, opt.arm_length / 16.0));
  double prev_length = -1.0;
  for (int it = 0; it < opt.max_levels; ++it) {
    ++level;
    for (auto& n : nodes) n.p = bp.step(n.p);
    auto walk = detail::refine_walk(bp, nodes, level, max_spacing, opt.window, target_arclength);
    nodes = std::move(walk.nodes);
    if (walk.stop) return detail::make_curve(nodes, kind, branch, max_spacing, *walk.stop, level);
    if (walk.length - prev_length < 1e-12)
      return detail::make_curve(nodes, kind, branch, max_spacing, TraceStop::Saturated, level);
    prev_length = walk.length;
  }
  throw NumericFailure("manifold trace did not reach its target within the level cap");
}

/// True when no two non-adjacent segments of the polyline intersect.
inline bool is_simple(std::span<const Point2> pts) {
  auto orient = [](Point2 a, Point2 b, Point2 c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_seg = [](Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
  };
  auto cross = [&](Point2 a, Point2 b, Point2 c, Point2 d) {
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_seg(a, b, c)) || (o2 == 0 && on_seg(a, b, d)) || (o3 == 0 && on_seg(c, d, a)) ||
           (o4 == 0 && on_seg(c, d, b));
  };
  const std::size_t n = pts.size();
  if (n < 4) return true;
  // Sort segments by min x so only overlapping x ranges are compared.
  std::vector<std::size_t> order(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) order[i] = i;
  auto lo = [&](std::size_t i) { return std::min(pts[i].x, pts[i + 1].x); };
  auto hi = [&](std::size_t i) { return std::max(pts[i].x, pts[i + 1].x); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo(a) < lo(b); });
  for (std::size_t u = 0; u < order.size(); ++u) {
    const std::size_t i = order[u];
    for (std::size_t w = u + 1; w < order.size() && lo(order[w]) <= hi(i); ++w) {
      const std::size_t j = order[w];
      if (i + 1 == j || j + 1 == i) continue;
      if (cross(pts[i], pts[i + 1], pts[j], pts[j + 1])) return false;
    }
  }
  return true;
}

/// Euclidean distance from p to the nearest segment of any of the polylines.
inline double distance_to_polylines(Point2 p, std::span<const ManifoldCurve> curves) {
  double best = INFINITY;
  for (const ManifoldCurve& c : curves) {
    if (c.points.size() == 1) best = std::min(best, euclid_dist(p, c.points[0]));
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k)
      best = std::min(best, point_segment_distance(p, c.points[k], c.points[k + 1]));
  }
  return best;
}

enum class CrossingSide { LeftOfOrigin, RightUnitInterval };

inline const char* to_string(CrossingSide s) {
  return s == CrossingSide::LeftOfOrigin ? "LeftOfOrigin" : "RightUnitInterval";
}

struct CrossingSolution {
  double ybar = 0.0;
  double xbar = 0.0;
  CrossingSide side = CrossingSide::LeftOfOrigin;
  double bracket_width_final = 0.0;
};

/// Bisection for the fate transition on the horizontal segment [x_a, x_b] at
/// height y. x_a must go to alpha and x_b to infinity. ToOrigin at a midpoint
/// ends the search there.
template <PlanarMap M>
CrossingSolution refine_crossing(const M& map, double x_a, double x_b, double y, double tol,
                                 const OrbitBudget& budget) {
  OrbitClassifier<M> cls(map, budget, Direction::Forward);
  const Fate fa = cls({x_a, y}), fb = cls({x_b, y});
  if (fa.kind != FateKind::ToAlpha || fb.kind != FateKind::ToInfinity)
    throw NumericFailure("crossing bracket endpoints do not have the expected fates (ToAlpha, ToInfinity); got (" +
                         std::string(to_string(fa.kind)) + ", " + to_string(fb.kind) + ")");
  double a = x_a, b = x_b;
  while (std::abs(b - a) >= tol) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const Fate f = cls({m, y});
    if (f.kind == FateKind::ToOrigin) return {y, m, CrossingSide::LeftOfOrigin, std::abs(b - a)};
    if (f.kind == FateKind::Undecided) throw NumericFailure("undecided orbit while bisecting a crossing");
    (f.kind == FateKind::ToAlpha ? a : b) = m;
  }
  return {y, 0.5 * (a + b), CrossingSide::LeftOfOrigin, std::abs(b - a)};
}

/// delta and mu analogues used by the crossing brackets: delta_ref and the
/// slope of the first component at the origin (mu for the Henon family).
template <PlanarMap M>
std::pair<double, double> strip_params(const M& map) {
  return {map.delta_ref(), map.jacobian({0.0, 0.0}).a};
}

template <PlanarMap M>
OrbitBudget crossing_budget(const M& map) {
  return OrbitBudget::defaults_for(map.delta_ref());
}

/// The point (xbar, ybar) of W^s(0,0) with -beta ybar <= xbar <= 0.
template <PlanarMap M>
CrossingSolution xbar_left(const M& map, double ybar, double tol = 1e-12) {
  const auto [delta, mu] = strip_params(map);
  if (!(ybar >= 0.0 && ybar <= 2.0 * delta)) throw InvalidArgument("xbar_left needs 0 <= ybar <= 2 delta");
  if (!(mu > 1.0)) throw DynamicsPrecondition("xbar_left needs an expanding slope at the origin");
  if (ybar == 0.0) return {0.0, 0.0, CrossingSide::LeftOfOrigin, 0.0};
  const double beta = delta / (mu - 1.0);
  CrossingSolution s = refine_crossing(map, 0.0, -beta * ybar, ybar, tol, crossing_budget(map));
  s.side = CrossingSide::LeftOfOrigin;
  return s;
}

/// The point (xbar, ybar) of W^s(0,0) with 1 < xbar < 2.
template <PlanarMap M>
CrossingSolution xbar_right(const M& map, double ybar, double tol = 1e-12) {
  const double delta = map.delta_ref();
  if (!(ybar >= 0.0 && ybar <= 2.0 * delta)) throw InvalidArgument("xbar_right needs 0 <= ybar <= 2 delta");
  CrossingSolution s = refine_crossing(map, 1.0, 2.0, ybar, tol, crossing_budget(map));
  s.side = CrossingSide::RightUnitInterval;
  return s;
}

/// The curve C = F^-1(W') from Q' = (xbar_right(0), 0) to the origin, where W'
/// is the arc of W^s(0,0) in the upper strip between Q = F(Q') and the origin.
/// W' is the graph ybar -> xbar_left(ybar), so C(u) = F^-1(xbar_left(h(u)), h(u))
/// for u running from xbar_right(0) down to 0.
template <PlanarMap M>
ManifoldCurve curve_C(const M& map, int samples, double tol = 1e-12) {
  if (samples < 2) throw InvalidArgument("curve_C needs at least 2 samples");
  const double xr = xbar_right(map, 0.0, tol).xbar;
  const Point2 q = map.forward({xr, 0.0});
  const double delta = map.delta_ref();
  if (!(q.y >= 0.0 && q.y <= 2.0 * delta)) throw NumericFailure("Q is outside the strip 0 <= y <= 2 delta");
  ManifoldCurve c;
  c.kind = ManifoldKind::Stable;
  c.branch = Branch::Minus;
  c.points.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double u = xr * (1.0 - static_cast<double>(k) / (samples - 1));
    if (k == samples - 1) {
      c.points.push_back({0.0, 0.0});
      continue;
    }
    // (u, 0) maps to height h(u); its W' partner at that height pulls back to C(u).
    const double ybar = map.forward({u, 0.0}).y;
    const double xl = k == 0 ? q.x : xbar_left(map, std::min(ybar, 2.0 * delta), tol).xbar;
    c.points.push_back(map.inverse({xl, ybar}));
  }
  c.arclength = cumulative_arclength(c.points);
  for (std::size_t k = 1; k < c.points.size(); ++k)
    c.max_spacing = std::max(c.max_spacing, euclid_dist(c.points[k - 1], c.points[k]));
  return c;
}

/// The point of C above (u, 0) for 0 < u <= xbar_right(0).
template <PlanarMap M>
Point2 curve_C_point(const M& map, double u, double tol = 1e-12) {
  const double delta = map.delta_ref();
  const double ybar = map.forward({u, 0.0}).y;
  if (!(u > 0.0) || !(ybar >= 0.0 && ybar <= 2.0 * delta)) throw InvalidArgument("curve_C_point needs 0 < u <= xbar_right(0)");
  return map.inverse({xbar_left(map, ybar, tol).xbar, ybar});
}

}  // namespace henon
