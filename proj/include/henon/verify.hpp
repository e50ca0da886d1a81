#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "henon/basin.hpp"
#include "henon/error.hpp"
#include "henon/fixed_points.hpp"
#include "henon/geometry.hpp"
#include "henon/manifolds.hpp"
#include "henon/maps.hpp"
#include "henon/orbits.hpp"
#include "henon/regions.hpp"
#include "henon/scalar_map.hpp"

namespace henon {

using Json = nlohmann::ordered_json;

enum class Verdict { Pass, Fail, Inapplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inapplicable: return "Inapplicable";
  }
  return "?";
}

struct CheckFailure {
  Point2 point;
  std::string detail;
};

struct CheckReport {
  std::string check_id;
  std::string statement;
  std::string params;
  int samples = 0;
  int passes = 0;
  std::vector<CheckFailure> failures;
  Verdict verdict = Verdict::Pass;
  std::string reason;  // why the check was inapplicable
  Json metrics = Json::object();

  void record(bool ok, Point2 p, const std::string& detail) {
    ++samples;
    if (ok)
      ++passes;
    else
      failures.push_back({p, detail});
  }

  void finish() {
    if (verdict != Verdict::Inapplicable) verdict = failures.empty() ? Verdict::Pass : Verdict::Fail;
  }
};

inline Json to_json(const CheckReport& r) {
  Json j;
  j["check_id"] = r.check_id;
  j["statement"] = r.statement;
  j["params"] = r.params;
  j["samples"] = r.samples;
  j["passes"] = r.passes;
  Json f = Json::array();
  for (const auto& x : r.failures) f.push_back({{"x", x.point.x}, {"y", x.point.y}, {"detail", x.detail}});
  j["failures"] = f;
  j["verdict"] = to_string(r.verdict);
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["metrics"] = r.metrics;
  return j;
}

namespace detail {

using Rng = std::mt19937_64;

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

/// Rejection sample from {p : pred(p)}. Even draws use the near field
/// [-3,4]x[-3,3]; odd draws use the far band 10 <= ||p||_inf <= 20.
template <class Pred>
Point2 sample_region(Rng& rng, int k, Pred&& pred) {
  for (int tries = 0; tries < 1000000; ++tries) {
    Point2 p;
    if (k % 2 == 0) {
      p = {uniform(rng, -3.0, 4.0), uniform(rng, -3.0, 3.0)};
    } else {
      const double r = uniform(rng, 10.0, 20.0);
      const double s = uniform(rng, -r, r);
      const int side = static_cast<int>(uniform(rng, 0.0, 4.0));
      p = side == 0 ? Point2{r, s} : side == 1 ? Point2{-r, s} : side == 2 ? Point2{s, r} : Point2{s, -r};
    }
    if (pred(p)) return p;
  }
  throw NumericFailure("region sampler could not find a point");
}

/// Forward orbit without region certificates: runs until ||p||_inf > 1e100
/// or overflow. Tracks whether x_n decreases strictly from iterate `from` on.
struct RawEscape {
  bool escaped = false;
  bool x_decreasing = true;
  int steps = 0;
};

template <PlanarMap M>
RawEscape raw_forward_escape(const M& map, Point2 p, int from = 0, int max_iter = 10000) {
  RawEscape r;
  for (int n = 0; n < max_iter; ++n) {
    const Point2 q = map.forward(p);
    if (!is_finite(q) || max_norm(q) > 1e100) {
      r.escaped = true;
      r.steps = n + 1;
      return r;
    }
    if (n >= from && !(q.x < p.x)) r.x_decreasing = false;
    p = q;
  }
  r.steps = max_iter;
  return r;
}

struct Ctx {
  const MapFamily& map;
  int samples;
  Rng& rng;
  CheckReport& report;
};

inline std::string fate_text(const Fate& f) { return to_string(f.kind); }

}  // namespace detail

struct CheckSpec {
  std::string id;
  std::string statement;
  bool general_ok = false;  // applicable to the general family
  /// Returns a reason when the check's parameter precondition fails.
  std::function<std::optional<std::string>(const HenonParams&)> precondition;
  std::function<void(detail::Ctx&)> run;
};

namespace detail {

inline std::optional<std::string> need_mu_range(const HenonParams& p) {
  if (!(p.mu > 1.0 && p.mu < 3.0)) return "needs 1 < mu < 3";
  if (!(p.delta > 0.0)) return "needs delta > 0";
  return std::nullopt;
}

inline std::function<std::optional<std::string>(const HenonParams&)> delta_below(
    double (*bound)(const DeltaThresholds&), const char* name, bool inclusive = false) {
  return [bound, name, inclusive](const HenonParams& p) -> std::optional<std::string> {
    if (auto r = need_mu_range(p)) return r;
    const double b = bound(delta_thresholds(p.delta, p.mu));
    const bool ok = inclusive ? p.delta <= b : p.delta < b;
    if (!ok) return std::string("needs delta ") + (inclusive ? "<= " : "< ") + name + " = " + format_real(b);
    return std::nullopt;
  };
}

inline std::optional<std::string> no_precondition(const HenonParams&) { return std::nullopt; }

inline std::optional<std::string> need_nonzero_delta(const HenonParams& p) {
  if (p.delta == 0.0) return "needs delta != 0";
  return std::nullopt;
}

inline HenonParams henon_of(const MapFamily& m) { return *m.henon_params(); }

// ---- individual checks -------------------------------------------------

inline void check_lemma4(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  int longest = 0;
  for (int k = 0; k < c.samples; ++k) {
    const Point2 p = sample_region(c.rng, k, [&](Point2 q) {
      return classify_region(hp, q).contains(RegionTag::WDelta);
    });
    Point2 q = p;
    bool increasing = true, escaped = false;
    int n = 0;
    for (; n < 1000; ++n) {
      const Point2 r = c.map.inverse(q);
      if (!is_finite(r) || std::abs(r.y) > 1e100) {
        escaped = true;
        break;
      }
      if (!(std::abs(r.y) > std::abs(q.y))) increasing = false;
      q = r;
    }
    longest = std::max(longest, n);
    c.report.record(increasing && escaped, p,
                    !increasing ? "|y_{-n}| not strictly increasing" : "backward orbit did not escape");
  }
  c.report.metrics["max_backward_steps_to_1e100"] = longest;
}

inline void check_beta_cone(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const double beta = hp.delta / (hp.mu - 1.0);
  for (int k = 0; k < c.samples; ++k) {
    const Point2 p = sample_region(c.rng, k, [&](Point2 q) { return detail::in_beta_cone(beta, q); });
    const RawEscape e = raw_forward_escape(c.map, p);
    c.report.record(e.escaped && e.x_decreasing, p,
                    !e.escaped ? "forward orbit did not escape" : "x_n not strictly decreasing");
  }
  c.report.metrics["beta"] = beta;
}

/// Points whose first image lies in the beta cone and whose orbit escapes.
inline void check_first_image_in_cone(Ctx& c, const std::function<Point2(Rng&, int)>& draw) {
  const HenonParams hp = henon_of(c.map);
  const double beta = hp.delta / (hp.mu - 1.0);
  for (int k = 0; k < c.samples; ++k) {
    const Point2 p = draw(c.rng, k);
    const Point2 q = c.map.forward(p);
    const bool in_cone = detail::in_beta_cone(beta, q);
    const RawEscape e = raw_forward_escape(c.map, p, 1);
    c.report.record(in_cone && e.escaped, p, !in_cone ? "first image not in the beta cone" : "orbit did not escape");
  }
}

inline void check_right_wedge(Ctx& c) {
  const double d = henon_of(c.map).delta;
  check_first_image_in_cone(c, [d](Rng& rng, int k) {
    const double x = k % 2 == 0 ? uniform(rng, 2.0, 4.0) : uniform(rng, 10.0, 20.0);
    return Point2{x, uniform(rng, 0.0, d * x)};
  });
}

inline void check_q4_right_wedge(Ctx& c) {
  check_first_image_in_cone(c, [](Rng& rng, int k) {
    if (k % 2 == 0) return Point2{uniform(rng, 2.0, 4.0), uniform(rng, -3.0, 0.0)};
    return Point2{uniform(rng, 10.0, 20.0), uniform(rng, -20.0, 0.0)};
  });
}

inline void check_q4_deep_strip(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const double d0 = delta_thresholds(hp.delta, hp.mu).delta0;
  check_first_image_in_cone(c, [d0](Rng& rng, int k) {
    const double y = k % 2 == 0 ? uniform(rng, -d0 - 3.0, -d0) : uniform(rng, -d0 - 20.0, -d0 - 10.0);
    return Point2{uniform(rng, 0.0, 2.0), y};
  });
  c.report.metrics["delta0"] = d0;
}

inline void check_polydisk(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const Point2 a = *c.map.alpha();
  const double coef = 2.0 - hp.mu - 2.0 * hp.delta * hp.delta;
  c.report.metrics["linear_coefficient"] = coef;
  c.report.metrics["jacobian_at_alpha_a"] = c.map.jacobian(a).a;
  const OrbitBudget budget = OrbitBudget::defaults_for(hp.delta);
  const OrbitClassifier<MapFamily> cls(c.map, budget, Direction::Forward);
  std::optional<double> chosen;
  std::vector<CheckFailure> last_failures;
  int last_samples = 0;
  for (double r : {0.4, 0.2, 0.1, 0.05}) {
    const double gamma = std::abs(2.0 - hp.mu) + 2.0 * hp.delta * hp.delta + hp.mu * r;
    const double ratio_bound = gamma + hp.delta;
    if (!(ratio_bound < 1.0)) continue;
    std::vector<CheckFailure> fails;
    double worst = 0.0;
    for (int k = 0; k < c.samples; ++k) {
      const Point2 p{a.x + uniform(c.rng, -r, r), a.y + uniform(c.rng, -r, r)};
      Point2 q = p;
      bool ok = true;
      for (int n = 0; n < 200; ++n) {
        const double before = max_dist(q, a);
        if (before < 1e-13) break;
        q = c.map.forward(q);
        const double ratio = max_dist(q, a) / before;
        worst = std::max(worst, ratio);
        if (ratio > ratio_bound + 1e-9) {
          ok = false;
          break;
        }
      }
      const Fate f = cls(p);
      if (!ok || f.kind != FateKind::ToAlpha)
        fails.push_back({p, !ok ? "contraction ratio above gamma + delta" : "fate " + fate_text(f)});
    }
    last_failures = std::move(fails);
    last_samples = c.samples;
    if (last_failures.empty()) {
      chosen = r;
      c.report.metrics["r"] = r;
      c.report.metrics["gamma"] = gamma;
      c.report.metrics["ratio_bound"] = ratio_bound;
      c.report.metrics["worst_ratio"] = worst;
      break;
    }
  }
  c.report.samples = last_samples;
  c.report.passes = last_samples - static_cast<int>(last_failures.size());
  c.report.failures = last_failures;
  if (!chosen && last_failures.empty()) c.report.failures.push_back({a, "no radius gives gamma + delta < 1"});
}

inline void check_vertical_strip(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const double xmu = 1.0 - 1.0 / hp.mu, h = 1.0;
  const OrbitClassifier<MapFamily> cls(c.map, OrbitBudget::defaults_for(hp.delta), Direction::Forward);
  std::vector<CheckFailure> last;
  int used = 0;
  bool found = false;
  for (double r : {0.4, 0.2, 0.1, 0.05}) {
    std::vector<CheckFailure> fails;
    for (int k = 0; k < c.samples; ++k) {
      const Point2 p{uniform(c.rng, xmu - r, xmu + r), uniform(c.rng, -h, h)};
      const Fate f = cls(p);
      if (f.kind != FateKind::ToAlpha) fails.push_back({p, "fate " + fate_text(f)});
    }
    last = std::move(fails);
    used = c.samples;
    if (last.empty()) {
      c.report.metrics["r"] = r;
      found = true;
      break;
    }
  }
  c.report.metrics["h"] = h;
  c.report.metrics["x_mu"] = xmu;
  c.report.samples = used;
  c.report.passes = used - static_cast<int>(last.size());
  c.report.failures = last;
  if (!found && last.empty()) c.report.failures.push_back({{xmu, 0.0}, "no radius found"});
}

inline void check_adelta(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const OrbitClassifier<MapFamily> cls(c.map, OrbitBudget::defaults_for(hp.delta), Direction::Forward);
  for (int k = 0; k < c.samples; ++k) {
    Point2 p{0.0, 0.0};
    while (p.x == 0.0 && p.y == 0.0) p = {uniform(c.rng, 0.0, 1.0), uniform(c.rng, 0.0, 2.0 * hp.delta)};
    const Fate f = cls(p);
    c.report.record(f.kind == FateKind::ToAlpha, p, "fate " + fate_text(f));
  }
}

inline void check_left_crossing(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const double beta = hp.delta / (hp.mu - 1.0);
  const OrbitClassifier<MapFamily> cls(c.map, OrbitBudget::defaults_for(hp.delta), Direction::Forward);
  double min_gap = INFINITY;
  for (int k = 0; k < c.samples; ++k) {
    const double yb = uniform(c.rng, 0.0, 2.0 * hp.delta);
    if (yb == 0.0) continue;
    const CrossingSolution s = xbar_left(c.map, yb);
    const bool inside = -beta * yb < s.xbar && s.xbar < 0.0;
    min_gap = std::min({min_gap, s.xbar + beta * yb, -s.xbar});
    const double x_right = uniform(c.rng, s.xbar + 1e-9, 0.0);
    const double x_left = uniform(c.rng, -beta * yb - 1.0, s.xbar - 1e-9);
    const Fate fr = cls({x_right, yb}), fl = cls({x_left, yb});
    const bool ok = inside && fr.kind == FateKind::ToAlpha && fl.kind == FateKind::ToInfinity;
    c.report.record(ok, {s.xbar, yb},
                    !inside ? "xbar outside (-beta ybar, 0)"
                            : "fates right/left of xbar: " + fate_text(fr) + "/" + fate_text(fl));
  }
  c.report.metrics["beta"] = beta;
  c.report.metrics["min_margin_inside_bracket"] = min_gap;
}

inline void check_right_crossing(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const OrbitClassifier<MapFamily> cls(c.map, OrbitBudget::defaults_for(hp.delta), Direction::Forward);
  for (int k = 0; k < c.samples; ++k) {
    const double yb = uniform(c.rng, 0.0, 2.0 * hp.delta);
    const CrossingSolution s = xbar_right(c.map, yb);
    const bool inside = 1.0 < s.xbar && s.xbar < 2.0;
    const double x_left = uniform(c.rng, 1.0, s.xbar - 1e-9);
    const double x_right = uniform(c.rng, s.xbar + 1e-9, 2.0);
    const Fate fl = cls({x_left, yb}), fr = cls({x_right, yb});
    const bool ok = inside && fl.kind == FateKind::ToAlpha && fr.kind == FateKind::ToInfinity;
    c.report.record(ok, {s.xbar, yb},
                    !inside ? "xbar outside (1, 2)"
                            : "fates left/right of xbar: " + fate_text(fl) + "/" + fate_text(fr));
  }
}

/// Every sampled point gets a decided fate (origin, alpha or infinity).
inline void check_trichotomy(Ctx& c, double y_lo, double y_hi, bool open_lo, bool open_hi) {
  const HenonParams hp = henon_of(c.map);
  const OrbitClassifier<MapFamily> cls(c.map, OrbitBudget::defaults_for(hp.delta), Direction::Forward);
  std::array<int, 4> counts{};
  for (int k = 0; k < c.samples; ++k) {
    double y = uniform(c.rng, y_lo, y_hi);
    while ((open_lo && y == y_lo) || (open_hi && y == y_hi)) y = uniform(c.rng, y_lo, y_hi);
    const double x = k % 2 == 0 ? uniform(c.rng, -3.0, 4.0)
                                : (uniform(c.rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uniform(c.rng, 10.0, 20.0);
    const Fate f = cls({x, y});
    ++counts[static_cast<std::size_t>(f.kind)];
    c.report.record(f.kind != FateKind::Undecided, {x, y}, "undecided after max_iter");
  }
  c.report.metrics["to_origin"] = counts[0];
  c.report.metrics["to_alpha"] = counts[1];
  c.report.metrics["to_infinity"] = counts[2];
  c.report.metrics["undecided"] = counts[3];
}

inline void check_strip(Ctx& c) {
  const double d = henon_of(c.map).delta;
  check_trichotomy(c, 0.0, 2.0 * d, true, true);
}

inline void check_lower(Ctx& c) { check_trichotomy(c, -3.0, 0.0, false, true); }

inline void check_below_curve_c(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const OrbitClassifier<MapFamily> cls(c.map, OrbitBudget::defaults_for(hp.delta), Direction::Forward);
  const ManifoldCurve curve = curve_C(c.map, 201);
  const double xr = curve.points.front().x;
  // Shape of C: endpoints Q' and origin, interior strictly below the x-axis.
  for (std::size_t k = 1; k + 1 < curve.points.size(); ++k)
    if (!(curve.points[k].y < 0.0)) c.report.failures.push_back({curve.points[k], "interior point of C not below y = 0"});
  double min_y = 0.0;
  for (const Point2& p : curve.points) min_y = std::min(min_y, p.y);
  c.report.metrics["xbar_right_0"] = xr;
  c.report.metrics["curve_min_y"] = min_y;
  // P' = F^-1(P) = (1, x/delta) for P = (x, delta) on W'.
  const double xp = xbar_left(c.map, hp.delta).xbar;
  const Point2 pp = c.map.inverse({xp, hp.delta});
  if (!(std::abs(pp.x - 1.0) < 1e-12 && std::abs(pp.y - xp / hp.delta) < 1e-9 && pp.y < 0.0))
    c.report.failures.push_back({pp, "P' differs from (1, x/delta)"});
  c.report.metrics["P_prime_y"] = pp.y;

  constexpr double margin = 1e-7;
  for (int k = 0; k < c.samples; ++k) {
    const double x = uniform(c.rng, 0.0, xr);
    if (x == 0.0) continue;
    const double yc = curve_C_point(c.map, x).y;
    const bool below = k % 2 == 0;
    const double y = below ? uniform(c.rng, std::min(yc, -1e-3) - 6.0, yc - margin) : uniform(c.rng, yc + margin, 0.0);
    if (y >= 0.0) continue;
    const Fate f = cls({x, y});
    const FateKind want = below ? FateKind::ToInfinity : FateKind::ToAlpha;
    c.report.record(f.kind == want, {x, y},
                    std::string(below ? "below" : "above") + " C but fate " + fate_text(f));
  }
}

inline void check_periodic(Ctx& c) {
  const GridSpec box{-2.0, 3.0, -2.0, 2.0, 40, 40};
  const int per_cell = std::max(1, c.samples / 400);
  const PeriodicCensus census = find_periodic_points(c.map, 6, box, per_cell);
  const auto expected = fixed_points(c.map, GridSpec{-2.0, 3.0, -2.0, 2.0, 20, 20});
  c.report.metrics["starts_used"] = census.starts_used;
  c.report.metrics["non_converged"] = census.non_converged;
  c.report.metrics["orbits"] = census.orbit_count();
  for (const PeriodicPoint& p : census.found) {
    const bool fixed = p.period == 1;
    const bool known = std::any_of(expected.begin(), expected.end(),
                                   [&](const FixedPointInfo& f) { return max_dist(f.location, p.point) <= 1e-8; });
    auto r = map_power(c.map, p.point, p.period);
    const bool sound = r && max_dist(r->first, p.point) < 1e-9;
    c.report.record(fixed && known && sound, p.point,
                    !fixed ? "periodic point of period " + std::to_string(p.period)
                           : !known ? "fixed point not among the expected ones" : "residual above 1e-9");
  }
  for (const auto& f : expected) {
    const bool seen = std::any_of(census.found.begin(), census.found.end(),
                                  [&](const PeriodicPoint& p) { return max_dist(f.location, p.point) <= 1e-8; });
    c.report.record(seen, f.location, "expected fixed point missing from census");
  }
  if (expected.size() != 2) c.report.failures.push_back({{0.0, 0.0}, "expected exactly two fixed points"});
}

inline std::vector<ManifoldCurve> stable_curves(const MapFamily& map, double target, double spacing) {
  return {trace_manifold(map, ManifoldKind::Stable, Branch::Plus, target, spacing),
          trace_manifold(map, ManifoldKind::Stable, Branch::Minus, target, spacing)};
}

/// Picks a random interior node of the curves satisfying pred; returns the
/// node and a unit normal from its neighbors.
template <class Pred>
std::optional<std::pair<Point2, Point2>> random_node(Rng& rng, const std::vector<ManifoldCurve>& curves, Pred&& pred) {
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t c = 0; c < curves.size(); ++c)
    for (std::size_t k = 1; k + 1 < curves[c].points.size(); ++k)
      if (pred(curves[c].points[k])) idx.emplace_back(c, k);
  if (idx.empty()) return std::nullopt;
  const auto [c, k] = idx[std::uniform_int_distribution<std::size_t>(0, idx.size() - 1)(rng)];
  const Point2 t = curves[c].points[k + 1] - curves[c].points[k - 1];
  const double n = euclid_norm(t);
  return std::pair{curves[c].points[k], Point2{-t.y / n, t.x / n}};
}

inline void check_basin_boundary(Ctx& c) {
  const auto curves = stable_curves(c.map, 20.0, 0.002);
  const OrbitClassifier<MapFamily> cls(c.map, OrbitBudget::defaults_for(c.map.delta_ref()), Direction::Forward);
  const Window u{-0.25, 0.25, -0.25, 0.25};
  constexpr double push = 1e-6;
  for (int k = 0; k < c.samples; ++k) {
    if (k % 2 == 0) {
      // On W^s: the two sides of the curve have different fates.
      auto node = random_node(c.rng, curves, [&](Point2 p) { return u.contains(p) && max_norm(p) > 1e-4; });
      if (!node) {
        c.report.record(false, {0.0, 0.0}, "no stable manifold nodes in the neighborhood");
        continue;
      }
      const auto [p, n] = *node;
      const Fate a = cls(p + push * n), b = cls(p - push * n);
      const bool split = (a.kind == FateKind::ToAlpha && b.kind == FateKind::ToInfinity) ||
                         (a.kind == FateKind::ToInfinity && b.kind == FateKind::ToAlpha);
      c.report.record(split, p, "sides of W^s have fates " + fate_text(a) + "/" + fate_text(b));
    } else {
      // Off W^s: the fate is decided and constant on a ball of half the distance.
      Point2 p;
      double d = 0.0;
      do {
        p = {uniform(c.rng, u.x_min, u.x_max), uniform(c.rng, u.y_min, u.y_max)};
        d = distance_to_polylines(p, curves);
      } while (d <= 1e-5);
      const double ang = uniform(c.rng, 0.0, 2.0 * M_PI);
      const Point2 q = p + (0.5 * d) * Point2{std::cos(ang), std::sin(ang)};
      const Fate a = cls(p), b = cls(q);
      const bool ok = (a.kind == FateKind::ToAlpha || a.kind == FateKind::ToInfinity) && a.kind == b.kind;
      c.report.record(ok, p, "off-manifold fates " + fate_text(a) + "/" + fate_text(b));
    }
  }
  c.report.metrics["neighborhood"] = "[-0.25,0.25]^2";
}

inline void check_stable_backward(Ctx& c) {
  const auto curves = stable_curves(c.map, 20.0, 0.002);
  const OrbitClassifier<MapFamily> cls(c.map, OrbitBudget::defaults_for(c.map.delta_ref()), Direction::Backward);
  for (int k = 0; k < c.samples; ++k) {
    auto node = random_node(c.rng, curves, [](Point2 p) { return max_norm(p) > 1e-6; });
    const Point2 p = node->first;
    const Fate f = cls(p);
    c.report.record(f.kind == FateKind::ToInfinity, p, "backward fate " + fate_text(f));
  }
}

/// Budget under which backward convergence to the saddle is observable: the
/// backward map amplifies transverse errors by about (lambda_u / lambda_s),
/// so only a short approach can be confirmed.
inline OrbitBudget observable_backward_budget(double delta) {
  OrbitBudget b = OrbitBudget::defaults_for(delta);
  b.attract_tol = 2e-3;
  b.confirm_steps = 3;
  return b;
}

inline void check_filled_julia(Ctx& c) {
  const double delta = c.map.delta_ref();
  const OrbitBudget budget = OrbitBudget::defaults_for(delta);
  const OrbitClassifier<MapFamily> fwd(c.map, budget, Direction::Forward);
  const OrbitClassifier<MapFamily> bwd_loose(c.map, observable_backward_budget(delta), Direction::Backward);
  const ManifoldCurve up = trace_manifold(c.map, ManifoldKind::Unstable, Branch::Plus, 10.0, 0.0005);
  const ManifoldCurve um = trace_manifold(c.map, ManifoldKind::Unstable, Branch::Minus, 10.0, 0.0005);
  // The branch whose far end converges to alpha is the one meeting K.
  const Fate end_plus = fwd(up.points.back());
  const bool plus_side = end_plus.kind == FateKind::ToAlpha;
  const ManifoldCurve& kside = plus_side ? up : um;
  const ManifoldCurve& other = plus_side ? um : up;
  c.report.metrics["k_side_branch"] = plus_side ? "Plus" : "Minus";
  c.report.metrics["backward_attract_tol"] = 2e-3;

  for (const Point2 f : {Point2{0.0, 0.0}, *c.map.alpha()})
    c.report.record(in_filled_julia(c.map, f, budget) == Membership::Yes, f, "fixed point not in K");

  auto node_on = [&](const ManifoldCurve& cv, double s_max) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k < cv.points.size(); ++k)
      if (cv.arclength[k] <= s_max && cv.arclength[k] >= 1e-4) idx.push_back(k);
    return cv.points[idx[std::uniform_int_distribution<std::size_t>(0, idx.size() - 1)(c.rng)]];
  };
  const Window box{-0.5, 1.5, -0.3, 0.3};
  for (int k = 0; k < c.samples; ++k) {
    switch (k % 3) {
      case 0: {
        // K-side W^u points: forward to alpha, backward observably to the origin.
        const Point2 p = node_on(kside, 0.02);
        const Fate f = fwd(p), b = bwd_loose(p);
        c.report.record(f.kind == FateKind::ToAlpha && b.kind == FateKind::ToOrigin, p,
                        "W^u point fates forward/backward " + fate_text(f) + "/" + fate_text(b));
        break;
      }
      case 1: {
        // The other W^u branch leaves every bounded set.
        const Point2 p = node_on(other, other.length());
        const Fate f = fwd(p);
        c.report.record(f.kind == FateKind::ToInfinity, p, "opposite W^u branch forward fate " + fate_text(f));
        break;
      }
      default: {
        // A generic point of the box is not in K.
        const Point2 p{uniform(c.rng, box.x_min, box.x_max), uniform(c.rng, box.y_min, box.y_max)};
        const Membership m = in_filled_julia(c.map, p, budget);
        c.report.record(m != Membership::Yes, p, "generic point reported in K");
      }
    }
  }
}

inline void check_conjugacy(Ctx& c) {
  const HenonParams hp = henon_of(c.map);
  const HenonMap f(hp), g(HenonParams{-hp.delta, hp.mu});
  double worst = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    const Point2 p{uniform(c.rng, -3.0, 4.0), uniform(c.rng, -3.0, 3.0)};
    const double dev = std::max(max_dist(conjugate_flip(f.forward(p)), g.forward(conjugate_flip(p))),
                                max_dist(conjugate_flip(f.inverse(p)), g.inverse(conjugate_flip(p))));
    worst = std::max(worst, dev);
    c.report.record(dev < 1e-12, p, "conjugacy deviation " + format_real(dev));
  }
  c.report.metrics["max_deviation"] = worst;
}

/// Parameter pairs: the map's own first, then random draws.
inline HenonParams draw_params(Ctx& c, int k, double d_lo, double d_hi, double m_lo, double m_hi) {
  if (k == 0) return henon_of(c.map);
  double d = 0.0;
  while (d == 0.0) d = uniform(c.rng, d_lo, d_hi);
  return {d, uniform(c.rng, m_lo, m_hi)};
}

inline void check_flip_saddle(Ctx& c) {
  for (int k = 0; k < c.samples; ++k) {
    const HenonParams p = draw_params(c, k, -3.0, 3.0, 1.0 + 1e-9, 3.0);
    if (std::abs(p.delta * p.delta - (1.0 + p.mu)) < 1e-9) continue;
    const Stability s = classify_stability(HenonMap(p).eigenvalues({0.0, 0.0}));
    const bool predicted = p.delta * p.delta < 1.0 + p.mu;
    c.report.record((s == Stability::FlipSaddle) == predicted, {p.delta, p.mu},
                    std::string("stability ") + to_string(s) + " at origin");
  }
  c.report.metrics["origin_stability"] = to_string(classify_stability(c.map.eigenvalues({0.0, 0.0})));
}

inline void check_eigen_signs(Ctx& c) {
  for (int k = 0; k < c.samples; ++k) {
    const HenonParams p = k % 2 == 0 ? henon_of(c.map) : draw_params(c, k, -3.0, 3.0, 0.01, 4.0);
    const double x = uniform(c.rng, -10.0, 10.0);
    const Eigenvalues e = HenonMap(p).eigenvalues({x, 0.0});
    c.report.record(e.minus < 0.0 && e.plus > 0.0, {p.delta, p.mu}, "eigenvalue signs wrong at x = " + format_real(x));
  }
}

inline void check_eigen_thresholds(Ctx& c) {
  for (int k = 0; k < c.samples; ++k) {
    const HenonParams p = draw_params(c, k, -2.0, 2.0, 0.01, 3.0);
    const double d2 = p.delta * p.delta;
    if (std::abs(d2 - (1.0 - p.mu)) < 1e-9 || std::abs(d2 - (1.0 + p.mu)) < 1e-9) continue;
    const Eigenvalues e = HenonMap(p).eigenvalues({0.0, 0.0});
    const bool ok = (e.plus > 1.0) == (d2 > 1.0 - p.mu) && (e.minus > -1.0) == (d2 < 1.0 + p.mu);
    c.report.record(ok, {p.delta, p.mu}, "origin eigenvalue thresholds disagree");
  }
}

inline void check_eigen_alpha(Ctx& c) {
  for (int k = 0; k < c.samples; ++k) {
    const HenonParams p = draw_params(c, k, -1.0, 1.0, 1.0 + 1e-9, 3.0);
    if (std::abs(p.mu - 3.0 * (1.0 - p.delta * p.delta)) < 1e-9) continue;
    const HenonMap m(p);
    const Eigenvalues e = m.eigenvalues(*m.alpha());
    const bool attracting = std::abs(e.minus) < 1.0 && std::abs(e.plus) < 1.0;
    c.report.record(attracting == (p.mu < 3.0 * (1.0 - p.delta * p.delta)), {p.delta, p.mu},
                    "alpha attraction disagrees with mu < 3(1 - delta^2)");
  }
}

}  // namespace detail

/// The published check catalog, in report order.
inline const std::vector<CheckSpec>& check_catalog() {
  using namespace detail;
  static const std::vector<CheckSpec> catalog = {
      {"lemma4_wdelta_backward_escape", "W_delta = {|y| >= 2 delta, |y| >= delta |x|} lies in W^u(inf)", false,
       delta_below([](const DeltaThresholds& t) { return t.lemma4_bound; }, "max(mu - 1, 1)"), check_lemma4},
      {"lemma5_beta_cone", "x <= min(-beta y, 0), (x, y) != 0, lies in W^s(inf)", false, need_mu_range,
       check_beta_cone},
      {"lemma6_right_wedge", "x >= 2, 0 <= y <= delta x lies in W^s(inf)", false,
       delta_below([](const DeltaThresholds& t) { return t.lemma6_bound; }, "sqrt(mu - 1)"), check_right_wedge},
      {"prop7_polydisk_contraction", "a polydisk P(alpha, r) lies in W^s(alpha)", false, need_mu_range,
       check_polydisk},
      {"cor8_vertical_strip_basin", "|x - x_mu| <= r, |y| <= h lies in W^s(alpha)", false, need_mu_range,
       check_vertical_strip},
      {"prop9_adelta_basin", "A_delta = [0,1] x [0, 2 delta] minus the origin lies in W^s(alpha)", false,
       need_mu_range, check_adelta},
      {"thm10_left_crossing", "unique -beta ybar < xbar < 0 on W^s(0,0); alpha to the right, infinity to the left",
       false, need_mu_range, check_left_crossing},
      {"thm12_right_crossing", "unique 1 < xbar < 2 on W^s(0,0); alpha to the left, infinity to the right", false,
       need_mu_range, check_right_crossing},
      {"prop13_strip_trichotomy", "orbits in 0 < y < 2 delta converge to (0,0), to alpha or to infinity", false,
       need_mu_range, check_strip},
      {"prop16i_q4_right_wedge", "x >= 2, y <= 0 lies in W^s(inf)", false,
       delta_below([](const DeltaThresholds& t) { return t.prop16i_bound; }, "sqrt(3 mu (mu - 1))"),
       check_q4_right_wedge},
      {"prop16ii_q4_deep_strip", "0 <= x <= 2, y <= -delta0 lies in W^s(inf)", false,
       [](const HenonParams& p) -> std::optional<std::string> {
         if (auto r = need_mu_range(p)) return r;
         if (p.delta > 1.0) return "needs delta <= 1";
         return std::nullopt;
       },
       check_q4_deep_strip},
      {"prop18_lower_trichotomy", "orbits with y < 0 converge to (0,0), to alpha or to infinity", false,
       need_mu_range, check_lower},
      {"lemma17_below_curve_c", "below C in the fourth quadrant is W^s(inf); between C and (0, xbar) is W^s(alpha)",
       false, need_mu_range, check_below_curve_c},
      {"lemma19_periodic_points", "the only periodic points are the two fixed points", true, need_mu_range,
       check_periodic},
      {"lemma19_basin_boundary", "near the origin the basin boundary of alpha is W^s(0,0)", true, need_mu_range,
       check_basin_boundary},
      {"lemma19b_stable_backward_escape", "W^s(0,0) minus the origin lies in W^u(inf)", false, need_mu_range,
       check_stable_backward},
      {"lemma21_filled_julia", "K = {alpha, (0,0)} union (W^s(alpha) intersect W^u(0,0))", false, need_mu_range,
       check_filled_julia},
      {"conjugacy_flip", "G(x, y) = (x, -y) conjugates F_{delta,mu} to F_{-delta,mu}", false, need_nonzero_delta,
       check_conjugacy},
      {"flip_saddle_origin", "for mu > 1 the origin is a flip saddle iff delta^2 < 1 + mu", false,
       [](const HenonParams& p) -> std::optional<std::string> {
         if (!(p.mu > 1.0)) return "needs mu > 1";
         return need_nonzero_delta(p);
       },
       check_flip_saddle},
      {"eigen_signs", "lambda_1 < 0 < lambda_2 for every x when delta != 0", false, need_nonzero_delta,
       check_eigen_signs},
      {"eigen_thresholds_origin", "at the origin lambda_2 > 1 iff delta^2 > 1 - mu, lambda_1 > -1 iff delta^2 < 1 + mu",
       false, no_precondition, check_eigen_thresholds},
      {"eigen_alpha_attracting", "for 1 < mu < 3, alpha is attracting iff mu < 3(1 - delta^2)", false,
       no_precondition, check_eigen_alpha},
  };
  return catalog;
}

inline const CheckSpec& find_check(std::string_view id) {
  for (const auto& c : check_catalog())
    if (c.id == id) return c;
  throw InvalidArgument("unknown check id '" + std::string(id) + "'");
}

/// Runs one catalog check with `samples` seeded draws.
inline CheckReport run_check(std::string_view check_id, const MapFamily& map, int samples, std::uint64_t seed) {
  const CheckSpec& spec = find_check(check_id);
  if (samples < 1) throw InvalidArgument("samples must be at least 1");
  CheckReport r;
  r.check_id = spec.id;
  r.statement = spec.statement;
  r.params = map.describe();

  std::optional<std::string> skip;
  if (const auto hp = map.henon_params()) {
    skip = spec.precondition(*hp);
  } else if (!spec.general_ok) {
    skip = "applies to the Henon family only";
  } else {
    // The general family needs a saddle at the origin and an attracting alpha.
    try {
      saddle_at_origin(map);
      if (!map.alpha()) skip = "no second fixed point";
    } catch (const DynamicsPrecondition& e) {
      skip = e.what();
    }
  }
  if (skip) {
    r.verdict = Verdict::Inapplicable;
    r.reason = *skip;
    return r;
  }
  detail::Rng rng(seed ^ detail::fnv1a(spec.id));
  detail::Ctx ctx{map, samples, rng, r};
  try {
    spec.run(ctx);
  } catch (const NumericFailure& e) {
    // A numerical breakdown inside a check counts against it.
    r.failures.push_back({{NAN, NAN}, std::string("numeric failure: ") + e.what()});
  }
  r.finish();
  return r;
}

/// Hypotheses on g and h for the general family, one report item each.
inline CheckReport check_general_hypotheses(const ScalarMap& g, const ScalarMap& h, double delta, double a, double b) {
  if (!(a <= -1.0 && b >= 2.0)) throw InvalidArgument("the hypothesis interval must contain [-1, 2]");
  CheckReport r;
  r.check_id = "general_hypotheses";
  r.statement = "hypotheses on g and h for the general family";
  r.params = "g=" + g.name + ",h=" + h.name + ",delta=" + format_real(delta);
  Json items = Json::object();
  auto item = [&](const char* name, bool ok, double x, double value) {
    r.record(ok, {x, value}, name);
    items[name] = {{"pass", ok}, {"value", value}};
  };
  constexpr int n = 10001;
  auto grid = [&](double lo, double hi, int k) { return lo + (hi - lo) * k / (n - 1); };

  item("g(0)=0", std::abs(g.f(0.0)) <= 1e-12, 0.0, g.f(0.0));
  item("g(1)=0", std::abs(g.f(1.0)) <= 1e-12, 1.0, g.f(1.0));
  double gmin = INFINITY, gmax = -INFINITY;
  for (int k = 0; k < n; ++k) {
    const double v = g.f(grid(0.0, 1.0, k));
    gmin = std::min(gmin, v);
    gmax = std::max(gmax, v);
  }
  item("g([0,1]) in [0,1)", gmin >= -1e-12 && gmax < 1.0, gmin, gmax);
  item("g'(0)>1", g.df(0.0) > 1.0, 0.0, g.df(0.0));
  item("g'(1)<-1", g.df(1.0) < -1.0, 1.0, g.df(1.0));
  double sup2 = -INFINITY;
  for (int k = 0; k < n; ++k) {
    sup2 = std::max(sup2, g.d2f(grid(a, 0.0, k)));
    sup2 = std::max(sup2, g.d2f(grid(1.0, b, k)));
  }
  item("g''<gamma<0 outside (0,1)", sup2 < 0.0, 0.0, sup2);
  int changes = 0;
  double prev = g.df(0.0);
  for (int k = 1; k < n; ++k) {
    const double v = g.df(grid(0.0, 1.0, k));
    if ((v > 0.0) != (prev > 0.0)) ++changes;
    prev = v;
  }
  item("g unimodal on [0,1]", changes == 1 && g.df(0.0) > 0.0, 0.0, changes);

  double xg = 0.5;
  for (int k = 0; k < 100000; ++k) xg = g.f(xg);
  const bool fixed = std::abs(g.f(xg) - xg) < 1e-12 && xg > 0.0 && xg < 1.0;
  const bool attracting = std::abs(g.df(xg)) < 1.0;
  item("attracting fixed point x_g in (0,1)", fixed && attracting, xg, g.df(xg));
  r.metrics["x_g"] = xg;
  int basin_misses = 0;
  for (int k = 1; k < 1000; ++k) {
    double x = k / 1000.0;
    for (int it = 0; it < 100000 && std::abs(x - xg) > 1e-10; ++it) x = g.f(x);
    if (!(std::abs(x - xg) <= 1e-10)) ++basin_misses;
  }
  item("W^s(x_g) contains (0,1)", fixed && basin_misses == 0, xg, basin_misses);

  item("h(0)=0", std::abs(h.f(0.0)) <= 1e-14, 0.0, h.f(0.0));
  double min_dh = INFINITY;
  for (int k = 0; k < n; ++k) min_dh = std::min(min_dh, h.df(grid(a, b, k)));
  item("h'>0", min_dh > 0.0, 0.0, min_dh);
  const C2Estimate eps = c2_distance_to_linear(h, delta, a, b, n);
  item("||h - L_delta||_2 < delta/2", delta > 0.0 && eps.value < delta / 2.0, 0.0, eps.value);
  r.metrics["c2_distance"] = eps.value;
  r.metrics["c2_interval_only"] = eps.interval_only;
  const double cons = std::max(derivative_consistency_error(g, a, b), derivative_consistency_error(h, a, b));
  item("derivatives consistent", cons < 1e-5, 0.0, cons);
  r.metrics["items"] = items;
  r.finish();
  return r;
}

/// Checks used to decide, for each mu, the largest delta that still behaves as
/// the small-delta statements predict.
inline const std::vector<std::string>& sweep_checks() {
  static const std::vector<std::string> ids = {"lemma4_wdelta_backward_escape", "lemma5_beta_cone",
                                               "lemma6_right_wedge", "prop9_adelta_basin", "thm10_left_crossing",
                                               "thm12_right_crossing", "prop13_strip_trichotomy",
                                               "prop18_lower_trichotomy"};
  return ids;
}

struct SweepRow {
  double mu = 0.0;
  std::optional<double> delta_star;  // last delta of the passing prefix
  std::optional<double> first_failure;
};

/// For each mu, runs the sweep checks over the ascending delta grid and
/// reports the passing prefix.
inline std::vector<SweepRow> sweep_delta_star(const std::vector<double>& mus, std::vector<double> deltas, int samples,
                                              std::uint64_t seed) {
  for (double mu : mus)
    if (!(mu > 1.0 && mu < 3.0)) throw InvalidArgument("sweep needs every mu in (1, 3); got " + format_real(mu));
  std::sort(deltas.begin(), deltas.end());
  std::vector<SweepRow> rows;
  if (deltas.empty()) return rows;
  for (double mu : mus) {
    SweepRow row;
    row.mu = mu;
    for (double d : deltas) {
      bool pass = true;
      try {
        const MapFamily m = make_henon(d, mu);
        for (const auto& id : sweep_checks())
          if (run_check(id, m, samples, seed).verdict != Verdict::Pass) {
            pass = false;
            break;
          }
      } catch (const Error&) {
        pass = false;
      }
      if (!pass) {
        row.first_failure = d;
        break;
      }
      row.delta_star = d;
    }
    rows.push_back(row);
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "mu,delta_star,first_failure\n";
  for (const auto& r : rows)
    out << format_real(r.mu) << ',' << (r.delta_star ? format_real(*r.delta_star) : "") << ','
        << (r.first_failure ? format_real(*r.first_failure) : "") << '\n';
}

}  // namespace henon
