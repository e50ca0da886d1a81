#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "henon/error.hpp"
#include "henon/geometry.hpp"
#include "henon/io.hpp"
#include "henon/scalar_map.hpp"

namespace henon {

struct HenonParams {
  double delta = 0.0;
  double mu = 0.0;

  /// Membership in H_{1,1}: 0 < delta < 1 and 1 - delta^2 < mu < 3(1 - delta^2).
  bool h11_member() const {
    const double d2 = delta * delta;
    return delta > 0.0 && delta < 1.0 && 1.0 - d2 < mu && mu < 3.0 * (1.0 - d2);
  }
};

/// Eigenvalues of a Jacobian, named by the sign branch of the quadratic
/// formula: `minus` is (t - sqrt(disc)) / 2, `plus` is (t + sqrt(disc)) / 2.
/// For the Henon family minus < 0 < plus whenever delta != 0.
struct Eigenvalues {
  double minus = 0.0;
  double plus = 0.0;
};

/// Eigenvalues of [[a, b], [c, d]]. Complex pairs are rejected; the families
/// here have b*c > 0 on their domain, which keeps the spectrum real.
inline Eigenvalues real_eigenvalues(const Matrix2& m) {
  const double t = m.trace();
  const double disc = t * t - 4.0 * m.det();
  if (disc < 0.0) throw NumericFailure("Jacobian has complex eigenvalues");
  const double s = std::sqrt(disc);
  return {(t - s) / 2.0, (t + s) / 2.0};
}

/// Unit eigenvector of m for eigenvalue lambda, oriented so its largest
/// component is positive.
inline Point2 eigenvector(const Matrix2& m, double lambda) {
  // Rows of (m - lambda I) are orthogonal to the eigenvector; use the better
  // conditioned one.
  const Point2 r1{m.a - lambda, m.b};
  const Point2 r2{m.c, m.d - lambda};
  const Point2 r = euclid_norm(r1) >= euclid_norm(r2) ? r1 : r2;
  Point2 v{-r.y, r.x};
  const double n = euclid_norm(v);
  if (n == 0.0) return {1.0, 0.0};
  v = (1.0 / n) * v;
  const double lead = std::abs(v.x) >= std::abs(v.y) ? v.x : v.y;
  return lead < 0.0 ? -1.0 * v : v;
}

/// F(x, y) = (mu x (1 - x) + delta y, delta x).
class HenonMap {
 public:
  explicit HenonMap(HenonParams p) : p_(p) {
    if (!std::isfinite(p.delta) || !std::isfinite(p.mu)) throw InvalidArgument("Henon parameters must be finite");
    if (p.delta == 0.0) throw InvalidArgument("delta = 0 makes the Henon map non-invertible");
    if (p.mu <= 0.0) throw InvalidArgument("the Henon family requires mu > 0");
  }

  const HenonParams& params() const { return p_; }
  std::optional<HenonParams> henon_params() const { return p_; }
  double delta_ref() const { return p_.delta; }

  Point2 forward(Point2 q) const { return {p_.mu * q.x * (1.0 - q.x) + p_.delta * q.y, p_.delta * q.x}; }

  Point2 inverse(Point2 q) const {
    const double u = q.y / p_.delta;
    return {u, (q.x - p_.mu * u * (1.0 - u)) / p_.delta};
  }

  Matrix2 jacobian(Point2 q) const { return {p_.mu - 2.0 * p_.mu * q.x, p_.delta, p_.delta, 0.0}; }

  Eigenvalues eigenvalues(Point2 q) const {
    const double t = (1.0 - 2.0 * q.x) * p_.mu;
    const double s = std::sqrt(t * t + 4.0 * p_.delta * p_.delta);
    return {(t - s) / 2.0, (t + s) / 2.0};
  }

  /// The fixed point other than the origin: x = 1 - 1/mu + delta^2/mu, y = delta x.
  std::optional<Point2> alpha() const {
    const double x = 1.0 - 1.0 / p_.mu + p_.delta * p_.delta / p_.mu;
    return Point2{x, p_.delta * x};
  }

  std::string describe() const {
    return "henon(delta=" + format_real(p_.delta) + ",mu=" + format_real(p_.mu) + ")";
  }

 private:
  HenonParams p_;
};

/// F(x, y) = (g(x) + h(y), h(x)) with h(0) = 0 and h increasing, a small
/// perturbation of y -> delta_ref * y.
class GeneralMap {
 public:
  GeneralMap(ScalarMap g, ScalarMap h, double delta_ref, double work_a = -10.0, double work_b = 10.0)
      : g_(std::move(g)), h_(std::move(h)), delta_ref_(delta_ref), work_a_(work_a), work_b_(work_b) {
    if (!g_.f || !g_.df || !g_.d2f || !h_.f || !h_.df || !h_.d2f)
      throw InvalidArgument("scalar maps need f, df and d2f");
    if (!std::isfinite(delta_ref) || delta_ref == 0.0) throw InvalidArgument("delta_ref must be finite and non-zero");
    if (!(work_a < 0.0 && 0.0 < work_b)) throw InvalidArgument("working interval must contain 0");
    if (std::abs(h_.f(0.0)) > 1e-14) throw InvalidArgument("the general family requires h(0) = 0");
    constexpr int kSamples = 2001;
    for (int k = 0; k < kSamples; ++k) {
      const double x = work_a + (work_b - work_a) * k / (kSamples - 1);
      if (!(h_.df(x) > 0.0)) throw InvalidArgument("h must be strictly increasing on the working interval");
    }
    if (derivative_consistency_error(g_, work_a, work_b) > 1e-5 ||
        derivative_consistency_error(h_, work_a, work_b) > 1e-5)
      throw InvalidArgument("supplied derivatives disagree with finite differences");
    band_ = c2_distance_to_linear(h_, delta_ref_, work_a, work_b, kSamples).value;
    alpha_ = locate_alpha();
  }

  const ScalarMap& g() const { return g_; }
  const ScalarMap& h() const { return h_; }
  double delta_ref() const { return delta_ref_; }
  /// Sampled ||h - L_delta||_2 on the working interval.
  double band() const { return band_; }
  std::pair<double, double> working_interval() const { return {work_a_, work_b_}; }
  std::optional<HenonParams> henon_params() const { return std::nullopt; }

  Point2 forward(Point2 q) const { return {g_.f(q.x) + h_.f(q.y), h_.f(q.x)}; }

  Point2 inverse(Point2 q) const {
    const double u = h_inverse(q.y);
    return {u, h_inverse(q.x - g_.f(u))};
  }

  Matrix2 jacobian(Point2 q) const { return {g_.df(q.x), h_.df(q.y), h_.df(q.x), 0.0}; }

  Eigenvalues eigenvalues(Point2 q) const { return real_eigenvalues(jacobian(q)); }

  std::optional<Point2> alpha() const { return alpha_; }

  std::string describe() const {
    return "general(g=" + g_.name + ",h=" + h_.name + ",delta=" + format_real(delta_ref_) + ")";
  }

  /// Solves h(t) = v. The bracket [v/(delta+eps), v/(delta-eps)] follows from
  /// delta - eps <= h' <= delta + eps and h(0) = 0; it is widened if the
  /// sampled band was optimistic. Newton steps falling outside the bracket are
  /// replaced by bisection.
  double h_inverse(double v) const {
    if (v == 0.0) return 0.0;
    if (!std::isfinite(v)) return v;
    const double d = std::abs(delta_ref_);
    double lo, hi;
    if (band_ < d) {
      const double a = v / (d + band_), b = v / (d - band_);
      lo = std::min(a, b);
      hi = std::max(a, b);
    } else {
      lo = -std::abs(v) - 1.0;
      hi = std::abs(v) + 1.0;
    }
    auto resid = [&](double t) { return h_.f(t) - v; };
    // The band can be zero (linear h), so the widening step has a relative floor.
    auto step = [&] { return std::max(hi - lo, 1e-12 * (1.0 + std::abs(lo) + std::abs(hi))); };
    for (int k = 0; resid(lo) > 0.0; ++k) {
      if (k == 200) throw NumericFailure("h inverse: cannot bracket root");
      lo -= step();
    }
    for (int k = 0; resid(hi) < 0.0; ++k) {
      if (k == 200) throw NumericFailure("h inverse: cannot bracket root");
      hi += step();
    }
    if (!(h_.df(lo) > 0.0) || !(h_.df(hi) > 0.0))
      throw NumericFailure("h inverse: h' changes sign in the bracket");

    double t = std::clamp(v / delta_ref_, lo, hi);
    for (int it = 0; it < 200; ++it) {
      const double r = resid(t);
      if (r == 0.0) return t;
      const double slope = h_.df(t);
      if (!(slope > 0.0)) throw NumericFailure("h inverse: h' changes sign in the bracket");
      (r > 0.0 ? hi : lo) = t;
      double next = t - r / slope;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(next) ||
          hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(next))
        return next;
      t = next;
    }
    return t;
  }

 private:
  // Fixed points satisfy y = h(x) and x = g(x) + h(h(x)); the non-zero root
  // of phi(x) = g(x) + h(h(x)) - x is located by a sign scan then polished.
  std::optional<Point2> locate_alpha() const {
    auto phi = [&](double x) { return g_.f(x) + h_.f(h_.f(x)) - x; };
    constexpr int kScan = 4000;
    const double a = 1e-6, b = 2.0;
    double prev_x = a, prev = phi(a);
    for (int k = 1; k <= kScan; ++k) {
      const double x = a + (b - a) * k / kScan;
      const double cur = phi(x);
      if (std::isfinite(prev) && std::isfinite(cur) && (prev > 0.0) != (cur > 0.0)) {
        double lo = prev_x, hi = x;
        const bool rising = cur > prev;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
          const double m = 0.5 * (lo + hi);
          ((phi(m) > 0.0) == rising ? hi : lo) = m;
        }
        const double xa = 0.5 * (lo + hi);
        return Point2{xa, h_.f(xa)};
      }
      prev_x = x;
      prev = cur;
    }
    return std::nullopt;
  }

  ScalarMap g_, h_;
  double delta_ref_;
  double work_a_, work_b_;
  double band_ = 0.0;
  std::optional<Point2> alpha_;
};

/// The interface shared by every planar map the algorithms accept.
template <class M>
concept PlanarMap = requires(const M& m, Point2 p) {
  { m.forward(p) } -> std::same_as<Point2>;
  { m.inverse(p) } -> std::same_as<Point2>;
  { m.jacobian(p) } -> std::same_as<Matrix2>;
  { m.eigenvalues(p) } -> std::same_as<Eigenvalues>;
  { m.alpha() } -> std::same_as<std::optional<Point2>>;
  { m.henon_params() } -> std::same_as<std::optional<HenonParams>>;
  { m.delta_ref() } -> std::convertible_to<double>;
};

/// Either member of the two map families.
class MapFamily {
 public:
  MapFamily(HenonMap m) : impl_(std::move(m)) {}
  MapFamily(GeneralMap m) : impl_(std::move(m)) {}

  bool is_henon() const { return std::holds_alternative<HenonMap>(impl_); }
  const HenonMap* as_henon() const { return std::get_if<HenonMap>(&impl_); }
  const GeneralMap* as_general() const { return std::get_if<GeneralMap>(&impl_); }

  /// Calls f with the concrete map, so hot loops run without per-step dispatch.
  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), impl_);
  }

  Point2 forward(Point2 p) const { return visit([&](const auto& m) { return m.forward(p); }); }
  Point2 inverse(Point2 p) const { return visit([&](const auto& m) { return m.inverse(p); }); }
  Matrix2 jacobian(Point2 p) const { return visit([&](const auto& m) { return m.jacobian(p); }); }
  Eigenvalues eigenvalues(Point2 p) const { return visit([&](const auto& m) { return m.eigenvalues(p); }); }
  std::optional<Point2> alpha() const { return visit([](const auto& m) { return m.alpha(); }); }
  std::optional<HenonParams> henon_params() const { return visit([](const auto& m) { return m.henon_params(); }); }
  double delta_ref() const { return visit([](const auto& m) { return m.delta_ref(); }); }
  std::string describe() const { return visit([](const auto& m) { return m.describe(); }); }

  /// h11_member flag for the Henon kind; false for the general kind.
  bool h11_member() const { return is_henon() && as_henon()->params().h11_member(); }

 private:
  std::variant<HenonMap, GeneralMap> impl_;
};

inline MapFamily make_henon(double delta, double mu) { return HenonMap(HenonParams{delta, mu}); }

inline MapFamily make_general(ScalarMap g, ScalarMap h, double delta_ref, double work_a = -10.0,
                              double work_b = 10.0) {
  return GeneralMap(std::move(g), std::move(h), delta_ref, work_a, work_b);
}

/// Image of p; empty when the image overflows to a non-finite value.
template <PlanarMap M>
std::optional<Point2> apply(const M& map, Point2 p) {
  const Point2 q = map.forward(p);
  if (!is_finite(q)) return std::nullopt;
  return q;
}

/// Preimage of p; empty on overflow.
template <PlanarMap M>
std::optional<Point2> apply_inverse(const M& map, Point2 p) {
  const Point2 q = map.inverse(p);
  if (!is_finite(q)) return std::nullopt;
  return q;
}

template <PlanarMap M>
Matrix2 jacobian(const M& map, Point2 p) {
  return map.jacobian(p);
}

template <PlanarMap M>
Eigenvalues eigenvalues_at(const M& map, Point2 p) {
  return map.eigenvalues(p);
}

/// G(x, y) = (x, -y), which conjugates F_{delta,mu} to F_{-delta,mu}.
constexpr Point2 conjugate_flip(Point2 p) { return {p.x, -p.y}; }

}  // namespace henon
