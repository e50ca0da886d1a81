#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "henon/error.hpp"
#include "henon/geometry.hpp"
#include "henon/maps.hpp"

namespace henon {

enum class RegionTag : std::uint8_t {
  WDelta,        // |y| >= 2 delta, |y| >= delta |x|
  BetaCone,      // x <= min(-beta y, 0), not the origin
  RightWedge,    // x >= 2, 0 <= y <= delta x
  ADelta,        // 0 <= x <= 1, 0 <= y <= 2 delta, not the origin
  StripS,        // 0 < y < 2 delta
  BRect,         // 1 <= x <= 2, 0 <= y <= 2 delta
  Q4RightWedge,  // x >= 2, y <= 0
  Q4DeepStrip,   // 0 <= x <= 2, y <= -delta0
  Polydisk,      // max(|x - x_alpha|, |y - y_alpha|) <= r
  Other,
};

inline constexpr std::array<RegionTag, 10> kAllRegionTags{
    RegionTag::WDelta,     RegionTag::BetaCone,     RegionTag::RightWedge,  RegionTag::ADelta,
    RegionTag::StripS,     RegionTag::BRect,        RegionTag::Q4RightWedge, RegionTag::Q4DeepStrip,
    RegionTag::Polydisk,   RegionTag::Other};

inline const char* to_string(RegionTag t) {
  switch (t) {
    case RegionTag::WDelta: return "WDelta";
    case RegionTag::BetaCone: return "BetaCone";
    case RegionTag::RightWedge: return "RightWedge";
    case RegionTag::ADelta: return "ADelta";
    case RegionTag::StripS: return "StripS";
    case RegionTag::BRect: return "BRect";
    case RegionTag::Q4RightWedge: return "Q4RightWedge";
    case RegionTag::Q4DeepStrip: return "Q4DeepStrip";
    case RegionTag::Polydisk: return "Polydisk";
    case RegionTag::Other: return "Other";
  }
  return "?";
}

/// The tags holding at one point, with the parameters they were evaluated at.
struct RegionSet {
  std::uint16_t bits = 0;
  HenonParams params;
  std::optional<double> polydisk_radius;

  bool contains(RegionTag t) const { return (bits >> static_cast<unsigned>(t)) & 1u; }
  void insert(RegionTag t) { bits = static_cast<std::uint16_t>(bits | (1u << static_cast<unsigned>(t))); }
  bool empty() const { return bits == 0; }

  std::vector<RegionTag> tags() const {
    std::vector<RegionTag> out;
    for (RegionTag t : kAllRegionTags)
      if (contains(t)) out.push_back(t);
    return out;
  }

  /// "{A,B}" in enum order.
  std::string to_string() const {
    std::string s = "{";
    for (RegionTag t : tags()) {
      if (s.size() > 1) s += ',';
      s += henon::to_string(t);
    }
    return s + "}";
  }
};

struct DeltaThresholds {
  double lemma4_bound = 0.0;   // max(mu - 1, 1)
  double lemma6_bound = 0.0;   // sqrt(mu - 1)
  double prop16i_bound = 0.0;  // sqrt(3 mu (mu - 1))
  double beta = 0.0;           // delta / (mu - 1)
  double delta0 = 0.0;         // (2 delta^2 / (mu - 1) + 1) / delta
};

inline DeltaThresholds delta_thresholds(double delta, double mu) {
  if (!(mu > 1.0 && mu < 3.0)) throw InvalidArgument("delta thresholds need 1 < mu < 3");
  if (!(delta > 0.0)) throw InvalidArgument("delta thresholds need delta > 0");
  DeltaThresholds t;
  t.lemma4_bound = std::max(mu - 1.0, 1.0);
  t.lemma6_bound = std::sqrt(mu - 1.0);
  t.prop16i_bound = std::sqrt(3.0 * mu * (mu - 1.0));
  t.beta = delta / (mu - 1.0);
  t.delta0 = (2.0 * delta * delta / (mu - 1.0) + 1.0) / delta;
  return t;
}

namespace detail {

inline bool in_beta_cone(double beta, Point2 p) {
  return p.x <= std::min(-beta * p.y, 0.0) && !(p.x == 0.0 && p.y == 0.0);
}

}  // namespace detail

/// Every region whose closed-form inequalities hold at p. Polydisk is only
/// tested when a radius is supplied; BetaCone and Q4DeepStrip need mu > 1.
inline RegionSet classify_region(const HenonParams& params, Point2 p,
                                 std::optional<double> polydisk_radius = std::nullopt) {
  RegionSet s;
  s.params = params;
  s.polydisk_radius = polydisk_radius;
  const double d = params.delta, mu = params.mu;
  const double ay = std::abs(p.y);
  const bool origin = p.x == 0.0 && p.y == 0.0;

  if (ay >= 2.0 * d && ay >= d * std::abs(p.x)) s.insert(RegionTag::WDelta);
  if (mu > 1.0 && detail::in_beta_cone(d / (mu - 1.0), p)) s.insert(RegionTag::BetaCone);
  if (p.x >= 2.0 && p.y >= 0.0 && p.y <= d * p.x) s.insert(RegionTag::RightWedge);
  if (p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 2.0 * d && !origin) s.insert(RegionTag::ADelta);
  if (p.y > 0.0 && p.y < 2.0 * d) s.insert(RegionTag::StripS);
  if (p.x >= 1.0 && p.x <= 2.0 && p.y >= 0.0 && p.y <= 2.0 * d) s.insert(RegionTag::BRect);
  if (p.x >= 2.0 && p.y <= 0.0) s.insert(RegionTag::Q4RightWedge);
  if (mu > 1.0 && d != 0.0 && p.x >= 0.0 && p.x <= 2.0 && p.y <= -(2.0 * d * d / (mu - 1.0) + 1.0) / d)
    s.insert(RegionTag::Q4DeepStrip);
  if (polydisk_radius && mu != 0.0) {
    const double xa = 1.0 - 1.0 / mu + d * d / mu;
    if (max_dist(p, {xa, d * xa}) <= *polydisk_radius) s.insert(RegionTag::Polydisk);
  }
  if (s.empty()) s.insert(RegionTag::Other);
  return s;
}

/// Forward-escape certificates in the order they are tried, with the
/// parameter condition under which each argument goes through.
struct EscapeCertificates {
  bool beta_cone = false;
  bool right_wedge = false;
  bool q4_right_wedge = false;
  bool q4_deep_strip = false;
  bool wdelta = false;
  double delta = 0.0;
  double beta = 0.0;
  double delta0 = 0.0;

  /// delta > 0 and 1 < mu < 3 are required for any certificate.
  static EscapeCertificates for_params(const HenonParams& p) {
    EscapeCertificates c;
    if (!(p.delta > 0.0 && p.mu > 1.0 && p.mu < 3.0)) return c;
    const double d2 = p.delta * p.delta;
    c.delta = p.delta;
    c.beta = p.delta / (p.mu - 1.0);
    c.delta0 = (2.0 * d2 / (p.mu - 1.0) + 1.0) / p.delta;
    c.beta_cone = true;
    c.right_wedge = d2 < p.mu - 1.0;
    // x1 <= -mu x < -beta y1 needs delta^2 < mu (mu - 1).
    c.q4_right_wedge = d2 < p.mu * (p.mu - 1.0);
    c.q4_deep_strip = p.delta <= 1.0;
    // |y_{-1}| >= delta^{-2} (mu - 1) |y| grows only when delta^2 < mu - 1.
    c.wdelta = d2 < p.mu - 1.0;
    return c;
  }

  std::optional<RegionTag> forward_witness(Point2 q) const {
    if (beta_cone && detail::in_beta_cone(beta, q)) return RegionTag::BetaCone;
    if (right_wedge && q.x >= 2.0 && q.y >= 0.0 && q.y <= delta * q.x) return RegionTag::RightWedge;
    if (q4_right_wedge && q.x >= 2.0 && q.y <= 0.0) return RegionTag::Q4RightWedge;
    if (q4_deep_strip && q.x >= 0.0 && q.x <= 2.0 && q.y <= -delta0) return RegionTag::Q4DeepStrip;
    return std::nullopt;
  }

  std::optional<RegionTag> backward_witness(Point2 q) const {
    const double ay = std::abs(q.y);
    if (wdelta && ay >= 2.0 * delta && ay >= delta * std::abs(q.x)) return RegionTag::WDelta;
    return std::nullopt;
  }
};

}  // namespace henon
