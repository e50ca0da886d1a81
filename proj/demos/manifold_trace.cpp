// Traces both branches of W^s(0,0) and W^u(0,0) and compares the stable
// curve with the crossings of the strip 0 <= y <= 2 delta.
#include <cstdio>
#include <fstream>

#include "henon/henon.hpp"

int main() {
  using namespace henon;
  const double delta = 0.1;
  const MapFamily map = make_henon(delta, 2.0);
  const SaddleInfo s = saddle_at_origin(map);
  std::printf("lambda_s = %.15g  lambda_u = %.15g\n", s.lambda_s, s.lambda_u);

  std::vector<ManifoldCurve> stable;
  for (auto kind : {ManifoldKind::Stable, ManifoldKind::Unstable}) {
    for (auto branch : {Branch::Plus, Branch::Minus}) {
      const ManifoldCurve c = trace_manifold(map, kind, branch, 8.0, 0.002);
      const std::string name = std::string(kind == ManifoldKind::Stable ? "ws" : "wu") +
                               (branch == Branch::Plus ? "_plus" : "_minus") + ".csv";
      std::ofstream out(name);
      write_curve_csv(out, c);
      std::printf("%-12s %6zu points, length %.3f, stop=%s\n", name.c_str(), c.points.size(), c.length(),
                  to_string(c.stop));
      if (kind == ManifoldKind::Stable) stable.push_back(c);
    }
  }

  for (double yb : {0.05, 0.1, 0.15, 0.2}) {
    const double xl = xbar_left(map, yb).xbar, xr = xbar_right(map, yb).xbar;
    std::printf("ybar=%.2f  xbar_left=%.12f (off curve %.1e)  xbar_right=%.12f\n", yb, xl,
                distance_to_polylines({xl, yb}, stable), xr);
  }
}
