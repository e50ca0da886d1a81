#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "henon/geometry.hpp"

namespace henon {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

/// Point-set export: header `x,y`, one row per point.
inline void write_points_csv(std::ostream& out, std::span<const Point2> points) {
  out << "x,y\n";
  for (const Point2& p : points) out << format_real(p.x) << ',' << format_real(p.y) << '\n';
}

}  // namespace henon
