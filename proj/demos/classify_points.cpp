// Forward and backward fates of a few points for the reference Henon map.
#include <cstdio>

#include "henon/henon.hpp"

int main() {
  using namespace henon;
  const MapFamily map = make_henon(0.1, 2.0);
  const OrbitBudget budget = OrbitBudget::defaults_for(0.1);
  const Point2 points[] = {{0.5, 0.0}, {-1.0, 0.0}, {0.0, 0.0}, {1.0, -11.0}, {-0.005, 0.1}};
  for (const Point2 p : points) {
    const Fate f = classify_forward(map, p, budget);
    const Fate b = classify_backward(map, p, budget);
    std::printf("(%g, %g)  region=%s  forward=%s after %d  backward=%s after %d\n", p.x, p.y,
                classify_region(*map.henon_params(), p).to_string().c_str(), to_string(f.kind), f.iterations_used, to_string(b.kind),
                b.iterations_used);
  }
  if (const auto a = map.alpha()) std::printf("alpha = (%.15g, %.15g)\n", a->x, a->y);
}
