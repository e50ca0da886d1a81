#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "henon/error.hpp"
#include "henon/geometry.hpp"
#include "henon/manifolds.hpp"
#include "henon/maps.hpp"
#include "henon/orbits.hpp"
#include "henon/parallel.hpp"

namespace henon {

/// Forward fates of the cell centers of a grid, row-major from the bottom row
/// (j = 0 at y_min).
struct BasinRaster {
  GridSpec spec;
  std::vector<FateKind> fates;
  std::string map_description;

  FateKind at(int i, int j) const { return fates[static_cast<std::size_t>(j) * spec.nx + i]; }

  std::size_t count(FateKind k) const { return static_cast<std::size_t>(std::count(fates.begin(), fates.end(), k)); }
};

template <PlanarMap M>
std::string describe_map(const M& map) {
  return map.describe();
}

/// Classifies every cell center by forward iteration. Rows are split among
/// workers; each cell is written by exactly one worker, so the result does
/// not depend on the worker count.
template <PlanarMap M>
BasinRaster rasterize(const M& map, const GridSpec& spec, const OrbitBudget& budget, int workers = 1) {
  spec.validate();
  budget.validate();
  BasinRaster r;
  r.spec = spec;
  r.fates.assign(spec.cell_count(), FateKind::Undecided);
  r.map_description = describe_map(map);
  const OrbitClassifier<M> cls(map, budget, Direction::Forward);
  parallel_for(spec.ny, workers, [&](int j) {
    for (int i = 0; i < spec.nx; ++i) r.fates[static_cast<std::size_t>(j) * spec.nx + i] = cls(spec.cell_center(i, j)).kind;
  });
  return r;
}

inline BasinRaster rasterize(const MapFamily& map, const GridSpec& spec, const OrbitBudget& budget,
                             int workers = 1) {
  return map.visit([&](const auto& m) { return rasterize(m, spec, budget, workers); });
}

namespace detail {

inline bool decided(FateKind k) { return k != FateKind::Undecided; }

template <class F>
void for_each_neighbor4(const GridSpec& s, int i, int j, F&& f) {
  constexpr std::array<std::array<int, 2>, 4> off{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (const auto& o : off) {
    const int a = i + o[0], b = j + o[1];
    if (a >= 0 && a < s.nx && b >= 0 && b < s.ny) f(a, b);
  }
}

}  // namespace detail

/// Centers of ToAlpha cells with a 4-neighbor of a different decided fate.
/// Undecided neighbors never make a cell a boundary cell.
inline std::vector<Point2> extract_boundary(const BasinRaster& r) {
  std::vector<Point2> out;
  const GridSpec& s = r.spec;
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      if (r.at(i, j) != FateKind::ToAlpha) continue;
      bool edge = false;
      detail::for_each_neighbor4(s, i, j, [&](int a, int b) {
        const FateKind k = r.at(a, b);
        if (detail::decided(k) && k != FateKind::ToAlpha) edge = true;
      });
      if (edge) out.push_back(s.cell_center(i, j));
    }
  }
  return out;
}

/// Centers of Undecided cells.
inline std::vector<Point2> undecided_cells(const BasinRaster& r) {
  std::vector<Point2> out;
  for (int j = 0; j < r.spec.ny; ++j)
    for (int i = 0; i < r.spec.nx; ++i)
      if (r.at(i, j) == FateKind::Undecided) out.push_back(r.spec.cell_center(i, j));
  return out;
}

/// Largest Chebyshev cell-index distance from an Undecided cell to the
/// nearest boundary cell; 0 when there are no Undecided cells and -1 when
/// there are Undecided cells but no boundary.
inline int undecided_cell_distance(const BasinRaster& r) {
  const GridSpec& s = r.spec;
  const auto boundary = extract_boundary(r);
  std::vector<std::pair<int, int>> bidx;
  bidx.reserve(boundary.size());
  for (const Point2& p : boundary)
    bidx.emplace_back(static_cast<int>(std::floor((p.x - s.x_min) / s.dx())),
                      static_cast<int>(std::floor((p.y - s.y_min) / s.dy())));
  int worst = 0;
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      if (r.at(i, j) != FateKind::Undecided) continue;
      if (bidx.empty()) return -1;
      int best = INT32_MAX;
      for (auto [a, b] : bidx) best = std::min(best, std::max(std::abs(a - i), std::abs(b - j)));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

/// max over points of the Euclidean distance to the nearest curve segment.
inline double one_sided_hausdorff(std::span<const Point2> points, std::span<const ManifoldCurve> curves) {
  if (points.empty()) throw InvalidArgument("one_sided_hausdorff needs at least one point");
  bool any = false;
  for (const auto& c : curves) any = any || !c.points.empty();
  if (!any) throw InvalidArgument("one_sided_hausdorff needs a non-empty curve");
  std::vector<double> d(points.size());
  parallel_for(static_cast<int>(points.size()), 0,
               [&](int k) { d[static_cast<std::size_t>(k)] = distance_to_polylines(points[k], curves); });
  return *std::max_element(d.begin(), d.end());
}

inline double one_sided_hausdorff(std::span<const Point2> points, const ManifoldCurve& curve) {
  return one_sided_hausdorff(points, std::span<const ManifoldCurve>(&curve, 1));
}

struct KEstimate {
  std::vector<Point2> yes;
  std::vector<Point2> undecided;
};

/// Cell centers whose forward and backward orbits are both bounded, with the
/// undecided centers listed separately.
template <PlanarMap M>
KEstimate estimate_K(const M& map, const GridSpec& spec, const OrbitBudget& budget, int workers = 1) {
  spec.validate();
  budget.validate();
  const OrbitClassifier<M> fwd(map, budget, Direction::Forward);
  const OrbitClassifier<M> bwd(map, budget, Direction::Backward);
  std::vector<Membership> m(spec.cell_count(), Membership::Undecided);
  parallel_for(spec.ny, workers, [&](int j) {
    for (int i = 0; i < spec.nx; ++i) {
      const Point2 p = spec.cell_center(i, j);
      const Fate f = fwd(p);
      m[static_cast<std::size_t>(j) * spec.nx + i] =
          f.kind == FateKind::ToInfinity ? Membership::No : julia_membership(f, bwd(p));
    }
  });
  KEstimate k;
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      const Membership v = m[static_cast<std::size_t>(j) * spec.nx + i];
      if (v == Membership::Yes) k.yes.push_back(spec.cell_center(i, j));
      if (v == Membership::Undecided) k.undecided.push_back(spec.cell_center(i, j));
    }
  }
  return k;
}

inline KEstimate estimate_K(const MapFamily& map, const GridSpec& spec, const OrbitBudget& budget, int workers = 1) {
  return map.visit([&](const auto& m) { return estimate_K(m, spec, budget, workers); });
}

inline std::array<std::uint8_t, 3> fate_color(FateKind k) {
  switch (k) {
    case FateKind::ToAlpha: return {0, 0, 255};
    case FateKind::ToInfinity: return {255, 255, 255};
    case FateKind::ToOrigin: return {255, 0, 0};
    case FateKind::Undecided: return {128, 128, 128};
  }
  return {0, 0, 0};
}

/// Binary PPM (P6), top image row at y_max.
inline void write_ppm(std::ostream& out, const BasinRaster& r) {
  out << "P6\n" << r.spec.nx << ' ' << r.spec.ny << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(r.spec.nx) * 3);
  for (int j = r.spec.ny - 1; j >= 0; --j) {
    for (int i = 0; i < r.spec.nx; ++i) {
      const auto c = fate_color(r.at(i, j));
      for (int ch = 0; ch < 3; ++ch) row[static_cast<std::size_t>(i) * 3 + ch] = static_cast<char>(c[ch]);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace henon
