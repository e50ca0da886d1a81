#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "henon/error.hpp"

namespace henon {

/// A point of the plane. Escape to infinity is reported through Fate, never by
/// storing non-finite coordinates, so public entry points validate with
/// checked_point().
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline double max_norm(Point2 p) { return std::max(std::abs(p.x), std::abs(p.y)); }
inline double euclid_norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double max_dist(Point2 a, Point2 b) { return max_norm(a - b); }
inline double euclid_dist(Point2 a, Point2 b) { return euclid_norm(a - b); }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }

inline Point2 checked_point(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw InvalidArgument("point coordinates must be finite");
  return {x, y};
}

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Matrix2 {
  double a = 0.0, b = 0.0;
  double c = 0.0, d = 0.0;

  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  Point2 operator*(Point2 p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
  friend Matrix2 operator*(const Matrix2& l, const Matrix2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

/// Euclidean distance from p to the closed segment [a, b].
inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return euclid_dist(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return euclid_dist(p, a + t * ab);
}

/// Axis-aligned closed rectangle.
struct Window {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;

  bool contains(Point2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

/// Rectangular grid of nx * ny cells; the classified sample of cell (i, j) is
/// its center.
struct GridSpec {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  int nx = 2, ny = 2;

  void validate() const {
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) && std::isfinite(y_max)))
      throw InvalidArgument("grid bounds must be finite");
    if (!(x_min < x_max) || !(y_min < y_max)) throw InvalidArgument("grid bounds must satisfy min < max");
    if (nx < 1 || ny < 1) throw InvalidArgument("grid needs at least one cell per axis");
  }

  double dx() const { return (x_max - x_min) / nx; }
  double dy() const { return (y_max - y_min) / ny; }
  double cell_diagonal() const { return std::hypot(dx(), dy()); }
  std::size_t cell_count() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  Point2 cell_center(int i, int j) const {
    return {x_min + (i + 0.5) * dx(), y_min + (j + 0.5) * dy()};
  }
  Window window() const { return {x_min, x_max, y_min, y_max}; }
};

}  // namespace henon
