#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "henon/error.hpp"
#include "henon/geometry.hpp"
#include "henon/io.hpp"
#include "henon/maps.hpp"
#include "henon/regions.hpp"

namespace henon {

/// Iteration limits shared by every orbit classifier. Distances are in the
/// max norm.
struct OrbitBudget {
  int max_iter = 10000;
  double escape_norm = 10.0;
  double attract_tol = 1e-9;
  int confirm_steps = 5;

  /// escape_norm = max(10, 3/|delta|), the remaining fields at their defaults.
  static OrbitBudget defaults_for(double delta) {
    OrbitBudget b;
    b.escape_norm = std::max(10.0, 3.0 / std::abs(delta));
    return b;
  }

  void validate() const {
    if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
    if (!(escape_norm > 0.0) || !std::isfinite(escape_norm)) throw InvalidArgument("escape_norm must be positive");
    if (!(attract_tol > 0.0) || !std::isfinite(attract_tol)) throw InvalidArgument("attract_tol must be positive");
    if (confirm_steps < 1) throw InvalidArgument("confirm_steps must be at least 1");
  }
};

enum class FateKind : std::uint8_t { ToOrigin, ToAlpha, ToInfinity, Undecided };

inline const char* to_string(FateKind k) {
  switch (k) {
    case FateKind::ToOrigin: return "ToOrigin";
    case FateKind::ToAlpha: return "ToAlpha";
    case FateKind::ToInfinity: return "ToInfinity";
    case FateKind::Undecided: return "Undecided";
  }
  return "?";
}

enum class Direction { Forward, Backward };

inline const char* to_string(Direction d) { return d == Direction::Forward ? "Forward" : "Backward"; }

struct Fate {
  FateKind kind = FateKind::Undecided;
  /// Index of the first iterate of the confirming run for convergence, of the
  /// deciding iterate for escape, max_iter when undecided.
  int iterations_used = 0;
  /// Region whose escape argument certified ToInfinity, if one did.
  std::optional<RegionTag> witness;
  /// ToInfinity reached by overflow to a non-finite value.
  bool blowup = false;
};

struct Trajectory {
  std::vector<Point2> points;
  Direction direction = Direction::Forward;
  bool blowup = false;
};

/// n steps of F (or F^-1) from p. Stops early, with the blowup flag set, when
/// the next point would be non-finite.
template <PlanarMap M>
Trajectory iterate(const M& map, Point2 p, int n, Direction dir) {
  if (n < 0) throw InvalidArgument("iterate needs n >= 0");
  checked_point(p.x, p.y);
  Trajectory t;
  t.direction = dir;
  t.points.reserve(static_cast<std::size_t>(n) + 1);
  t.points.push_back(p);
  for (int k = 0; k < n; ++k) {
    const Point2 q = dir == Direction::Forward ? map.forward(p) : map.inverse(p);
    if (!is_finite(q)) {
      t.blowup = true;
      break;
    }
    t.points.push_back(q);
    p = q;
  }
  return t;
}

/// Trajectory export: header `n,x,y`.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  out << "n,x,y\n";
  for (std::size_t k = 0; k < t.points.size(); ++k)
    out << k << ',' << format_real(t.points[k].x) << ',' << format_real(t.points[k].y) << '\n';
}

/// Reusable classifier for one map and direction. Certificates are the Henon
/// region arguments; the general family has none and relies on the norm test.
template <PlanarMap M>
class OrbitClassifier {
 public:
  OrbitClassifier(const M& map, const OrbitBudget& budget, Direction dir)
      : map_(map), budget_(budget), dir_(dir), alpha_(map.alpha()) {
    budget.validate();
    if (auto hp = map.henon_params()) cert_ = EscapeCertificates::for_params(*hp);
  }

  Fate operator()(Point2 p) const {
    const double tol = budget_.attract_tol;
    int run_origin = 0, run_alpha = 0;
    int start_origin = 0, start_alpha = 0;
    Point2 q = p;
    for (int n = 0;; ++n) {
      if (!is_finite(q)) return {FateKind::ToInfinity, n, std::nullopt, true};

      bool near_fixed = false;
      if (max_norm(q) < tol) {
        if (run_origin++ == 0) start_origin = n;
        if (run_origin >= budget_.confirm_steps) return {FateKind::ToOrigin, start_origin, std::nullopt, false};
        near_fixed = true;
      } else {
        run_origin = 0;
      }
      if (alpha_ && max_dist(q, *alpha_) < tol) {
        if (run_alpha++ == 0) start_alpha = n;
        if (run_alpha >= budget_.confirm_steps) return {FateKind::ToAlpha, start_alpha, std::nullopt, false};
        near_fixed = true;
      } else {
        run_alpha = 0;
      }

      if (!near_fixed) {
        const auto w = dir_ == Direction::Forward ? cert_.forward_witness(q) : cert_.backward_witness(q);
        if (w) return {FateKind::ToInfinity, n, w, false};
        if (max_norm(q) > budget_.escape_norm) return {FateKind::ToInfinity, n, std::nullopt, false};
      }
      if (n == budget_.max_iter) break;
      q = dir_ == Direction::Forward ? map_.forward(q) : map_.inverse(q);
    }
    return {FateKind::Undecided, budget_.max_iter, std::nullopt, false};
  }

 private:
  const M& map_;
  OrbitBudget budget_;
  Direction dir_;
  std::optional<Point2> alpha_;
  EscapeCertificates cert_;
};

template <PlanarMap M>
Fate classify(const M& map, Point2 p, const OrbitBudget& budget, Direction dir) {
  checked_point(p.x, p.y);
  return OrbitClassifier<M>(map, budget, dir)(p);
}

template <PlanarMap M>
Fate classify_forward(const M& map, Point2 p, const OrbitBudget& budget) {
  return classify(map, p, budget, Direction::Forward);
}

template <PlanarMap M>
Fate classify_backward(const M& map, Point2 p, const OrbitBudget& budget) {
  return classify(map, p, budget, Direction::Backward);
}

enum class Membership : std::uint8_t { Yes, No, Undecided };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::Yes: return "Yes";
    case Membership::No: return "No";
    case Membership::Undecided: return "Undecided";
  }
  return "?";
}

inline bool converged(FateKind k) { return k == FateKind::ToOrigin || k == FateKind::ToAlpha; }

inline Membership julia_membership(const Fate& forward, const Fate& backward) {
  if (forward.kind == FateKind::ToInfinity || backward.kind == FateKind::ToInfinity) return Membership::No;
  if (converged(forward.kind) && converged(backward.kind)) return Membership::Yes;
  return Membership::Undecided;
}

/// Membership in the filled Julia set: bounded forward and backward orbits,
/// decided by classifying both directions.
template <PlanarMap M>
Membership in_filled_julia(const M& map, Point2 p, const OrbitBudget& budget) {
  const Fate f = classify_forward(map, p, budget);
  if (f.kind == FateKind::ToInfinity) return Membership::No;
  return julia_membership(f, classify_backward(map, p, budget));
}

}  // namespace henon
