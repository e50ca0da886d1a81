// Acceptance run at the reference parameters (delta, mu) = (0.1, 2), seed 7.
// Prints one PASS/FAIL line per criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "henon/henon.hpp"

using namespace henon;

namespace {

constexpr double kDelta = 0.1, kMu = 2.0;
constexpr std::uint64_t kSeed = 7;

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

int g_failed = 0;

void report(int n, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", n, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const GridSpec kRaster{-1.0, 2.0, -0.5, 0.5, 400, 400};

std::vector<ManifoldCurve> stable_branches(const MapFamily& map) {
  return {trace_manifold(map, ManifoldKind::Stable, Branch::Plus, 20.0, 0.002),
          trace_manifold(map, ManifoldKind::Stable, Branch::Minus, 20.0, 0.002)};
}

struct CensusResult {
  bool ok;
  std::string detail;
};

CensusResult census_two_fixed_points(const MapFamily& map, Point2 alpha_expected, double tol) {
  const PeriodicCensus c = find_periodic_points(map, 6, GridSpec{-2.0, 3.0, -2.0, 2.0, 40, 40}, 4, 1);
  bool ok = c.orbit_count() == 2;
  bool origin = false, alpha = false;
  for (const auto& p : c.found) {
    ok = ok && p.period == 1;
    origin = origin || max_norm(p.point) <= 1e-12;
    alpha = alpha || max_dist(p.point, alpha_expected) <= tol;
  }
  ok = ok && origin && alpha;
  return {ok, fmt("orbits=%zu periods=1:%s origin=%s alpha=%s starts=%ld", c.orbit_count(),
                  std::all_of(c.found.begin(), c.found.end(), [](const auto& p) { return p.period == 1; }) ? "yes"
                                                                                                          : "no",
                  origin ? "yes" : "no", alpha ? "yes" : "no", static_cast<long>(c.starts_used))};
}

void criterion1(const MapFamily& map) {
  Stopwatch sw;
  const auto r = census_two_fixed_points(map, {0.505, 0.0505}, 1e-8);
  const double t = sw.seconds();
  report(1, "periodic census", r.ok && t < 60.0, r.detail + fmt(" time=%.2fs (limit 60s)", t));
}

void criterion2(const MapFamily& map, const BasinRaster& raster, double t1, double t8) {
  const auto boundary = extract_boundary(raster);
  const auto curves = stable_branches(map);
  const double h = one_sided_hausdorff(boundary, curves);
  const double tol = 2.0 * kRaster.cell_diagonal();
  const double len = std::min(curves[0].length(), curves[1].length());
  report(2, "basin boundary is W^s(0,0)", h <= tol && len >= 6.0 && t1 < 120.0 && t8 < 20.0,
         fmt("hausdorff=%.6g tol=%.6g boundary_points=%zu min_branch_length=%.3f time_1=%.2fs time_8=%.2fs", h, tol,
             boundary.size(), len, t1, t8));
}

void criterion6(const BasinRaster& raster) {
  const std::size_t und = raster.count(FateKind::Undecided);
  const double frac = static_cast<double>(und) / static_cast<double>(raster.fates.size());
  const int dist = undecided_cell_distance(raster);
  report(6, "undecided tube", frac < 0.005 && dist >= 0 && dist <= 2,
         fmt("undecided=%zu fraction=%.6f max_cell_distance=%d", und, frac, dist));
}

void criterion3(const MapFamily& map) {
  const GridSpec grid{-0.5, 1.5, -0.3, 0.3, 400, 400};
  const OrbitBudget budget = OrbitBudget::defaults_for(kDelta);
  const KEstimate k = estimate_K(map, grid, budget, 0);
  const ManifoldCurve up = trace_manifold(map, ManifoldKind::Unstable, Branch::Plus, 10.0, 0.0005);
  const ManifoldCurve um = trace_manifold(map, ManifoldKind::Unstable, Branch::Minus, 10.0, 0.0005);
  const Point2 alpha = *map.alpha();
  const double tol = 2.0 * grid.cell_diagonal();

  // The branch whose far end converges to alpha is the K-side branch.
  const OrbitClassifier<MapFamily> fwd(map, budget, Direction::Forward);
  const bool plus_side = fwd(up.points.back()).kind == FateKind::ToAlpha;
  const ManifoldCurve& kside = plus_side ? up : um;
  const ManifoldCurve& other = plus_side ? um : up;

  std::size_t far = 0, wrong_branch = 0;
  const std::vector<ManifoldCurve> both{up, um};
  for (const Point2& p : k.yes) {
    const double d = std::min({distance_to_polylines(p, both), max_dist(p, alpha), max_norm(p)});
    if (d > tol) ++far;
    // Near the origin both branches are equally close; the margin applies elsewhere.
    if (max_norm(p) > tol) {
      const double dk = std::min(distance_to_polylines(p, std::span<const ManifoldCurve>(&kside, 1)),
                                 euclid_dist(p, alpha));
      const double dother = distance_to_polylines(p, std::span<const ManifoldCurve>(&other, 1));
      if (!(5.0 * dk < dother)) ++wrong_branch;
    }
  }

  // Grid cell centers almost surely miss the measure-zero set K, so the
  // manifold nodes themselves are classified as well.
  const OrbitBudget loose = [] {
    OrbitBudget b = OrbitBudget::defaults_for(kDelta);
    b.attract_tol = 2e-3;
    b.confirm_steps = 3;
    return b;
  }();
  const OrbitClassifier<MapFamily> bwd(map, loose, Direction::Backward);
  std::size_t kside_alpha = 0, kside_nodes = 0, kside_yes = 0, kside_near = 0, other_escape = 0, other_nodes = 0;
  for (std::size_t i = 1; i < kside.points.size(); ++i) {
    ++kside_nodes;
    if (fwd(kside.points[i]).kind == FateKind::ToAlpha) ++kside_alpha;
    if (kside.arclength[i] <= 0.02) {
      ++kside_near;
      if (julia_membership(fwd(kside.points[i]), bwd(kside.points[i])) == Membership::Yes) ++kside_yes;
    }
  }
  for (std::size_t i = 1; i < other.points.size(); ++i) {
    ++other_nodes;
    if (fwd(other.points[i]).kind == FateKind::ToInfinity) ++other_escape;
  }
  const bool ok = far == 0 && wrong_branch == 0 && kside_alpha == kside_nodes && kside_yes == kside_near &&
                  kside_near > 0 && other_escape == other_nodes;
  report(3, "filled Julia set", ok,
         fmt("grid_yes=%zu grid_undecided=%zu far_from_Wu=%zu wrong_branch=%zu k_side=%s "
             "k_side_nodes_to_alpha=%zu/%zu k_side_nodes_in_K=%zu/%zu other_nodes_to_infinity=%zu/%zu",
             k.yes.size(), k.undecided.size(), far, wrong_branch, plus_side ? "Plus" : "Minus", kside_alpha,
             kside_nodes, kside_yes, kside_near, other_escape, other_nodes));
}

void criterion4(const MapFamily& map) {
  Stopwatch sw;
  int pass = 0, total = 0;
  std::string bad;
  for (const auto& c : check_catalog()) {
    const CheckReport r = run_check(c.id, map, 1000, kSeed);
    ++total;
    if (r.verdict == Verdict::Pass && r.failures.empty()) {
      ++pass;
    } else {
      bad += " " + c.id + "=" + to_string(r.verdict);
      if (!r.failures.empty()) bad += "(" + r.failures.front().detail + ")";
    }
  }
  const double t = sw.seconds();
  report(4, "statement check catalog", pass == total && t < 120.0,
         fmt("pass=%d/%d time=%.2fs (limit 120s)", pass, total, t) + bad);
}

/// Fates along a horizontal scan; returns the number of fate changes and the
/// bracket around the last change.
struct Scan {
  int transitions = 0;
  int undecided = 0;
  double lo = 0.0, hi = 0.0;
};

Scan scan(const OrbitClassifier<MapFamily>& cls, double a, double b, double y, double step) {
  Scan s;
  const int n = static_cast<int>(std::ceil(std::abs(b - a) / step));
  FateKind prev = FateKind::Undecided;
  double prev_x = a;
  for (int i = 0; i <= n; ++i) {
    const double x = i == n ? b : a + (b - a) * i / n;
    const FateKind k = cls({x, y}).kind;
    if (k == FateKind::Undecided) {
      ++s.undecided;
      continue;
    }
    if (i > 0 && prev != FateKind::Undecided && k != prev) {
      ++s.transitions;
      s.lo = prev_x;
      s.hi = x;
    }
    prev = k;
    prev_x = x;
  }
  return s;
}

void criterion5(const MapFamily& map) {
  const OrbitBudget budget = OrbitBudget::defaults_for(kDelta);
  const OrbitClassifier<MapFamily> cls(map, budget, Direction::Forward);
  const double beta = kDelta / (kMu - 1.0);
  int bad_count = 0;
  double worst_shift = 0.0, worst_vs_solver = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double yb = 2.0 * kDelta * (k + 0.5) / 20.0;
    for (int side = 0; side < 2; ++side) {
      // Alpha end first, infinity end second.
      const double a = side == 0 ? 0.0 : 1.0;
      const double b = side == 0 ? -beta * yb : 2.0;
      std::vector<double> xs;
      for (double step : {1e-4, 5e-5}) {
        const Scan s = scan(cls, a, b, yb, step);
        if (s.transitions != 1 || s.undecided != 0) {
          ++bad_count;
          break;
        }
        xs.push_back(refine_crossing(map, s.lo, s.hi, yb, 1e-13, budget).xbar);
      }
      if (xs.size() != 2) continue;
      worst_shift = std::max(worst_shift, std::abs(xs[0] - xs[1]));
      const double solver = side == 0 ? xbar_left(map, yb).xbar : xbar_right(map, yb).xbar;
      worst_vs_solver = std::max(worst_vs_solver, std::abs(xs[0] - solver));
    }
  }
  report(5, "crossing uniqueness", bad_count == 0 && worst_shift <= 1e-8 && worst_vs_solver <= 1e-8,
         fmt("scans=40 bad_scans=%d max_shift_under_halving=%.3g max_diff_vs_solver=%.3g", bad_count, worst_shift,
             worst_vs_solver));
}

void criterion7() {
  Stopwatch sw;
  const ScalarMap g = scalar_map_from_spec("logistic(2)");
  const ScalarMap h = scalar_map_from_spec("linear_plus_sine(0.1,0.001)");
  const CheckReport hyp = check_general_hypotheses(g, h, kDelta, -1.0, 2.0);
  const MapFamily map = make_general(g, h, kDelta);
  const auto fps = fixed_points(map, GridSpec{-2.0, 3.0, -2.0, 2.0, 40, 40});
  const Point2 alpha = *map.alpha();
  const auto census = census_two_fixed_points(map, alpha, 1e-8);
  const BasinRaster raster = rasterize(map, kRaster, OrbitBudget::defaults_for(kDelta), 1);
  const auto boundary = extract_boundary(raster);
  const double hd = one_sided_hausdorff(boundary, stable_branches(map));
  const double tol = 2.0 * kRaster.cell_diagonal();
  const double t = sw.seconds();
  report(7, "general family", hyp.verdict == Verdict::Pass && fps.size() == 2 && census.ok && hd <= tol && t < 240.0,
         fmt("hypotheses=%s fixed_points=%zu census[%s] hausdorff=%.6g tol=%.6g time=%.2fs (limit 240s)",
             to_string(hyp.verdict), fps.size(), census.detail.c_str(), hd, tol, t));
}

void criterion8(const MapFamily& henon_map, const BasinRaster& raster) {
  const MapFamily general = make_general(scalar_map_from_spec("logistic(2)"),
                                         scalar_map_from_spec("linear_plus_sine(0.1,0.001)"), kDelta);
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> ux(-3.0, 4.0), uy(-3.0, 3.0);
  double jac_err = 0.0, rt_err = 0.0;
  for (const MapFamily* m : {&henon_map, &general}) {
    for (int k = 0; k < 100; ++k) {
      const Point2 p{ux(rng), uy(rng)};
      const Matrix2 j = m->jacobian(p);
      constexpr double e = 1e-6;
      const Point2 dx = (0.5 / e) * (m->forward(p + Point2{e, 0.0}) - m->forward(p - Point2{e, 0.0}));
      const Point2 dy = (0.5 / e) * (m->forward(p + Point2{0.0, e}) - m->forward(p - Point2{0.0, e}));
      jac_err = std::max({jac_err, std::abs(j.a - dx.x), std::abs(j.c - dx.y), std::abs(j.b - dy.x),
                          std::abs(j.d - dy.y)});
    }
    for (int k = 0; k < 10000; ++k) {
      const Point2 p{ux(rng), uy(rng)};
      const auto q = apply(*m, p);
      const auto back = q ? apply_inverse(*m, *q) : std::nullopt;
      rt_err = std::max(rt_err, back ? max_dist(*back, p) : INFINITY);
      const auto r = apply_inverse(*m, p);
      const auto fwd = r ? apply(*m, *r) : std::nullopt;
      rt_err = std::max(rt_err, fwd ? max_dist(*fwd, p) : INFINITY);
    }
  }
  const OrbitBudget budget = OrbitBudget::defaults_for(kDelta);
  const BasinRaster again = rasterize(henon_map, kRaster, budget, 1);
  const BasinRaster par = rasterize(henon_map, kRaster, budget, 8);
  const bool det = raster.fates == again.fates && raster.fates == par.fates;
  report(8, "numerical hygiene", jac_err < 1e-5 && rt_err < 1e-9 && det,
         fmt("jacobian_fd_error=%.3g round_trip_error=%.3g raster_deterministic=%s", jac_err, rt_err,
             det ? "yes" : "no"));
}

}  // namespace

int main() {
  const MapFamily map = make_henon(kDelta, kMu);
  std::printf("acceptance: %s seed=%llu\n", map.describe().c_str(), static_cast<unsigned long long>(kSeed));

  criterion1(map);

  const OrbitBudget budget = OrbitBudget::defaults_for(kDelta);
  Stopwatch sw1;
  const BasinRaster raster = rasterize(map, kRaster, budget, 1);
  const double t1 = sw1.seconds();
  Stopwatch sw8;
  (void)rasterize(map, kRaster, budget, 8);
  const double t8 = sw8.seconds();
  criterion2(map, raster, t1, t8);

  criterion3(map);
  criterion4(map);
  criterion5(map);
  criterion6(raster);
  criterion7();
  criterion8(map, raster);

  std::printf("acceptance: %s (%d failed)\n", g_failed == 0 ? "PASS" : "FAIL", g_failed);
  return g_failed == 0 ? 0 : 1;
}
