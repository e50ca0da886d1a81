// Writes basin.ppm and prints how far the raster boundary sits from W^s(0,0).
#include <cstdio>
#include <fstream>

#include "henon/henon.hpp"

int main(int argc, char** argv) {
  using namespace henon;
  const int n = argc > 1 ? std::atoi(argv[1]) : 300;
  const MapFamily map = make_henon(0.1, 2.0);
  const GridSpec grid{-1.0, 2.0, -0.5, 0.5, n, n};
  const BasinRaster r = rasterize(map, grid, OrbitBudget::defaults_for(0.1), 0);
  std::ofstream out("basin.ppm", std::ios::binary);
  write_ppm(out, r);

  const std::vector<ManifoldCurve> ws{trace_manifold(map, ManifoldKind::Stable, Branch::Plus, 20.0, 0.002),
                                      trace_manifold(map, ManifoldKind::Stable, Branch::Minus, 20.0, 0.002)};
  const auto boundary = extract_boundary(r);
  std::printf("%d x %d cells, %zu to alpha, %zu undecided\n", n, n, r.count(FateKind::ToAlpha),
              r.count(FateKind::Undecided));
  std::printf("boundary cells: %zu, distance to W^s: %.3g (cell diagonal %.3g)\n", boundary.size(),
              one_sided_hausdorff(boundary, ws), grid.cell_diagonal());
}
