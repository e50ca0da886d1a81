#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "henon/error.hpp"
#include "henon/geometry.hpp"
#include "henon/maps.hpp"
#include "henon/parallel.hpp"

namespace henon {

enum class Stability { Attracting, Saddle, FlipSaddle, Repelling, NonHyperbolic };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "Attracting";
    case Stability::Saddle: return "Saddle";
    case Stability::FlipSaddle: return "FlipSaddle";
    case Stability::Repelling: return "Repelling";
    case Stability::NonHyperbolic: return "NonHyperbolic";
  }
  return "?";
}

/// Stability from the (minus, plus) eigenvalue pair.
inline Stability classify_stability(const Eigenvalues& e, double tol = 1e-12) {
  const double a = std::abs(e.minus), b = std::abs(e.plus);
  if (std::abs(a - 1.0) <= tol || std::abs(b - 1.0) <= tol) return Stability::NonHyperbolic;
  if (a < 1.0 && b < 1.0) return Stability::Attracting;
  if (a > 1.0 && b > 1.0) return Stability::Repelling;
  const bool flip = (e.minus > -1.0 && e.minus < 0.0 && e.plus > 1.0) || (e.minus < -1.0 && b < 1.0);
  return flip ? Stability::FlipSaddle : Stability::Saddle;
}

inline bool is_saddle(Stability s) { return s == Stability::Saddle || s == Stability::FlipSaddle; }

struct FixedPointInfo {
  Point2 location;
  Eigenvalues eigenvalues;
  Stability stability = Stability::NonHyperbolic;
};

template <PlanarMap M>
FixedPointInfo describe_fixed_point(const M& map, Point2 p) {
  const Eigenvalues e = map.eigenvalues(p);
  return {p, e, classify_stability(e)};
}

/// F^n(p) together with the chained Jacobian D(F^n)(p); empty on blowup.
template <PlanarMap M>
std::optional<std::pair<Point2, Matrix2>> map_power(const M& map, Point2 p, int n) {
  Matrix2 d = Matrix2::identity();
  for (int k = 0; k < n; ++k) {
    d = map.jacobian(p) * d;
    p = map.forward(p);
    if (!is_finite(p)) return std::nullopt;
  }
  return std::pair{p, d};
}

struct NewtonResult {
  Point2 point;
  double residual = 0.0;
  bool converged = false;
};

/// Damped Newton iteration on p -> F^n(p) - p. A step is halved up to 20
/// times while it fails to reduce the max-norm residual.
template <PlanarMap M>
NewtonResult newton_periodic(const M& map, Point2 start, int n, double tol = 1e-9, int max_iter = 80,
                             double escape = 1e3) {
  auto residual_at = [&](Point2 p) -> std::optional<std::pair<Point2, Matrix2>> {
    auto r = map_power(map, p, n);
    if (!r) return std::nullopt;
    r->first = r->first - p;
    return r;
  };
  Point2 p = start;
  auto cur = residual_at(p);
  if (!cur) return {p, INFINITY, false};
  double res = max_norm(cur->first);
  for (int it = 0; it < max_iter; ++it) {
    if (res < 1e-14 * std::max(1.0, max_norm(p))) break;
    Matrix2 j = cur->second;
    j.a -= 1.0;
    j.d -= 1.0;
    const double det = j.det();
    if (det == 0.0 || !std::isfinite(det)) break;
    const Point2 r = cur->first;
    const Point2 step{-(j.d * r.x - j.b * r.y) / det, -(-j.c * r.x + j.a * r.y) / det};
    double scale = 1.0;
    bool improved = false;
    for (int h = 0; h <= 20; ++h, scale *= 0.5) {
      const Point2 q = p + scale * step;
      if (max_norm(q) > escape) continue;
      auto next = residual_at(q);
      if (!next) continue;
      const double nres = max_norm(next->first);
      if (nres < res) {
        p = q;
        cur = next;
        res = nres;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {p, res, res < tol};
}

/// Fixed points with stability. The Henon kind uses the closed forms; the
/// general kind runs Newton from the centers of `box` and needs one.
/// `warnings` receives "possible missed root" notes when two converged roots
/// land within 1e-6 of each other without deduplicating at 1e-8.
template <PlanarMap M>
std::vector<FixedPointInfo> fixed_points(const M& map, std::optional<GridSpec> box = std::nullopt,
                                         std::vector<std::string>* warnings = nullptr) {
  std::vector<FixedPointInfo> out;
  if (map.henon_params()) {
    out.push_back(describe_fixed_point(map, Point2{0.0, 0.0}));
    out.push_back(describe_fixed_point(map, *map.alpha()));
    return out;
  }
  if (!box) throw InvalidArgument("fixed point search for the general family needs a search box");
  box->validate();
  std::vector<Point2> roots;
  for (int j = 0; j < box->ny; ++j) {
    for (int i = 0; i < box->nx; ++i) {
      const NewtonResult r = newton_periodic(map, box->cell_center(i, j), 1);
      if (!r.converged) continue;
      bool dup = false;
      for (const Point2& q : roots) {
        const double d = max_dist(q, r.point);
        if (d <= 1e-8) {
          dup = true;
          break;
        }
        if (d <= 1e-6 && warnings)
          warnings->push_back("possible missed root near (" + format_real(r.point.x) + ", " +
                              format_real(r.point.y) + ")");
      }
      if (!dup) roots.push_back(r.point);
    }
  }
  std::sort(roots.begin(), roots.end(), [](Point2 a, Point2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  for (const Point2& p : roots) out.push_back(describe_fixed_point(map, p));
  return out;
}

struct PeriodicPoint {
  Point2 point;
  int period = 1;
  double residual = 0.0;
  int orbit = 0;  // index of the orbit this point belongs to
};

struct PeriodicCensus {
  int max_period = 0;
  std::vector<PeriodicPoint> found;
  long long starts_used = 0;
  long long non_converged = 0;

  int orbit_count() const {
    int n = 0;
    for (const auto& p : found) n = std::max(n, p.orbit + 1);
    return n;
  }
};

/// Smallest d dividing n with ||F^d(p) - p|| below tol.
template <PlanarMap M>
int minimal_period(const M& map, Point2 p, int n, double tol = 1e-8) {
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    auto r = map_power(map, p, d);
    if (r && max_dist(r->first, p) < tol) return d;
  }
  return n;
}

/// Newton census of periodic points up to max_period. Starts are placed in
/// every cell of `box` by a low-discrepancy (R2) sequence; roots are
/// deduplicated at 1e-6, reduced to their minimal period and reported with
/// their full orbit.
template <PlanarMap M>
PeriodicCensus find_periodic_points(const M& map, int max_period, const GridSpec& box, int starts_per_cell,
                                    int workers = 1) {
  if (max_period < 1) throw InvalidArgument("max_period must be at least 1");
  if (starts_per_cell < 1) throw InvalidArgument("starts_per_cell must be at least 1");
  box.validate();

  const int cells = static_cast<int>(box.cell_count());
  struct Hit {
    Point2 p;
    int period;
  };
  PeriodicCensus census;
  census.max_period = max_period;

  constexpr double g = 1.32471795724474602596;  // plastic number
  const double a1 = 1.0 / g, a2 = 1.0 / (g * g);

  for (int n = 1; n <= max_period; ++n) {
    std::vector<std::vector<Hit>> hits(static_cast<std::size_t>(cells));
    std::vector<int> misses(static_cast<std::size_t>(cells), 0);
    parallel_for(cells, workers, [&](int c) {
      const int i = c % box.nx, j = c / box.nx;
      for (int s = 0; s < starts_per_cell; ++s) {
        const double u = std::fmod(0.5 + a1 * (s + 1), 1.0);
        const double v = std::fmod(0.5 + a2 * (s + 1), 1.0);
        const Point2 start{box.x_min + (i + u) * box.dx(), box.y_min + (j + v) * box.dy()};
        const NewtonResult r = newton_periodic(map, start, n);
        if (!r.converged) {
          ++misses[static_cast<std::size_t>(c)];
          continue;
        }
        hits[static_cast<std::size_t>(c)].push_back({r.point, minimal_period(map, r.point, n)});
      }
    });
    census.starts_used += static_cast<long long>(cells) * starts_per_cell;
    for (int m : misses) census.non_converged += m;

    for (const auto& cell_hits : hits) {
      for (const Hit& h : cell_hits) {
        const bool known = std::any_of(census.found.begin(), census.found.end(),
                                       [&](const PeriodicPoint& q) { return max_dist(q.point, h.p) <= 1e-6; });
        if (known) continue;
        // Polish at the minimal period, then record the whole orbit.
        NewtonResult pol = newton_periodic(map, h.p, h.period);
        if (!pol.converged) pol = {h.p, max_norm(map_power(map, h.p, h.period)->first - h.p), true};
        const int orbit = census.orbit_count();
        Point2 q = pol.point;
        for (int k = 0; k < h.period; ++k) {
          auto r = map_power(map, q, h.period);
          census.found.push_back({q, h.period, max_dist(r->first, q), orbit});
          q = map.forward(q);
        }
      }
    }
  }
  return census;
}

}  // namespace henon
