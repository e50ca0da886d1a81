// A perturbed family F(x, y) = (g(x) + h(y), h(x)) with h close to delta*y.
#include <cstdio>

#include "henon/henon.hpp"

int main() {
  using namespace henon;
  const ScalarMap g = scalar_map_from_spec("logistic(2)");
  const ScalarMap h = scalar_map_from_spec("linear_plus_sine(0.1,0.001)");

  const CheckReport hyp = check_general_hypotheses(g, h, 0.1, -10.0, 10.0);
  for (const auto& [name, item] : hyp.metrics["items"].items())
    std::printf("  %-40s %s\n", name.c_str(), item["pass"].get<bool>() ? "ok" : "FAILS");

  const MapFamily map = make_general(g, h, 0.1);
  const Point2 p{0.3, 0.05};
  const Point2 q = map.forward(p);
  const Point2 back = map.inverse(q);
  std::printf("F(0.3, 0.05) = (%.15g, %.15g), round trip error %.2e\n", q.x, q.y, max_dist(back, p));

  const PeriodicCensus census = find_periodic_points(map, 4, GridSpec{-0.5, 1.5, -0.5, 0.5, 20, 10}, 4);
  std::printf("periodic orbits up to period 4: %d\n", census.orbit_count());
  for (const char* id : {"lemma19_periodic_points", "lemma19_basin_boundary"})
    std::printf("%s: %s\n", id, to_string(run_check(id, map, 200, 7).verdict));
}
