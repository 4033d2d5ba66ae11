#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fivebar/angles.hpp"
#include "fivebar/errors.hpp"
#include "fivebar/geometry.hpp"

namespace fivebar {

struct JointConfig {
  double theta1 = 0.0;
  double theta2 = 0.0;

  JointConfig() = default;
  JointConfig(double t1, double t2) : theta1(normalize_angle(t1)), theta2(normalize_angle(t2)) {}

  bool operator==(const JointConfig&) const = default;
};

struct PassiveAngles {
  double theta3 = 0.0;
  double theta4 = 0.0;

  PassiveAngles() = default;
  PassiveAngles(double t3, double t4) : theta3(normalize_angle(t3)), theta4(normalize_angle(t4)) {}

  bool operator==(const PassiveAngles&) const = default;
};

struct AssemblyMode {
  Sign sign = Sign::Positive;
  bool operator==(const AssemblyMode&) const = default;
};

enum ConfigFlag : std::uint8_t {
  kNoFlags = 0,
  kLeg1BoundaryPosture = 1u << 0,  // leg 1 stretched or folded
  kLeg2BoundaryPosture = 1u << 1,
  kTangent = 1u << 2,  // the two distal circles touch; single assembly
};

struct FullConfig {
  Geometry geometry;
  JointConfig q;
  PassiveAngles passive;
  Point2 p;
  std::uint8_t flags = kNoFlags;

  Point2 c() const { return geometry.a() + geometry.l1() * Point2(std::cos(q.theta1), std::sin(q.theta1)); }
  Point2 d() const { return geometry.b() + geometry.l3() * Point2(std::cos(q.theta2), std::sin(q.theta2)); }

  bool has(ConfigFlag f) const { return (flags & f) != 0; }
};

// Builds a configuration from actuated angles and the end point, recovering
// the passive angles from the link directions.
inline FullConfig make_config(const Geometry& g, const JointConfig& q, const Point2& p, std::uint8_t flags = kNoFlags) {
  FullConfig cfg{g, q, {}, p, flags};
  const Vector2 pc = p - cfg.c();
  const Vector2 pd = p - cfg.d();
  cfg.passive = PassiveAngles(std::atan2(pc.y(), pc.x()), std::atan2(pd.y(), pd.x()));
  return cfg;
}

inline double closure_residual(const FullConfig& cfg) {
  const double r1 = std::abs((cfg.p - cfg.c()).norm() - cfg.geometry.l2());
  const double r2 = std::abs((cfg.p - cfg.d()).norm() - cfg.geometry.l4());
  return std::max(r1, r2);
}

// ---------------------------------------------------------------------------
// Two-link leg

struct LegSolution {
  double actuated = 0.0;
  double passive = 0.0;
  bool boundary_posture = false;  // stretched or folded: both branches coincide
};

// Places a two-link chain from `anchor` so that its tip is at `target`.
// The branch selects the sign of sin(passive - actuated), the leg's B entry.
inline Result<LegSolution> try_leg_ik(const Point2& anchor, double proximal, double distal, const Point2& target,
                                      Sign branch, double length_tol = 0.0, double angular_tol = 1e-9) {
  const Vector2 v = target - anchor;
  const double r = v.norm();
  const double outer = proximal + distal;
  const double inner = std::abs(proximal - distal);
  if (r > outer + length_tol || r < inner - length_tol) return {ErrorKind::Unreachable, "target outside leg annulus"};

  const double cos_rel = std::clamp((r * r - proximal * proximal - distal * distal) / (2.0 * proximal * distal), -1.0, 1.0);
  const double rel = to_int(branch) * std::acos(cos_rel);
  const double sin_rel = std::sin(rel);
  const double actuated = std::atan2(v.y(), v.x()) - std::atan2(distal * sin_rel, proximal + distal * std::cos(rel));

  LegSolution s;
  s.actuated = normalize_angle(actuated);
  s.passive = normalize_angle(actuated + rel);
  s.boundary_posture = std::abs(sin_rel) <= angular_tol;
  return s;
}

inline LegSolution leg_ik(const Point2& anchor, double proximal, double distal, const Point2& target, Sign branch,
                          double length_tol = 0.0, double angular_tol = 1e-9) {
  return try_leg_ik(anchor, proximal, distal, target, branch, length_tol, angular_tol).value();
}

// ---------------------------------------------------------------------------
// Whole mechanism

// Unique configuration reaching `p` in the requested working mode. Returns
// ModeBoundary when a leg's B entry is within eps_b of zero.
inline Result<FullConfig> try_inverse_kinematics(const Geometry& g, const Point2& p, const WorkingMode& mode,
                                                 const Tolerances& tol) {
  if (mode.legs() != 2) throw ValidationError("mode", "five-bar working modes have two signs");
  auto leg1 = try_leg_ik(g.a(), g.l1(), g.l2(), p, mode[0], tol.residual, tol.angular);
  if (!leg1) return {ErrorKind::Unreachable, "leg 1"};
  auto leg2 = try_leg_ik(g.b(), g.l3(), g.l4(), p, mode[1], tol.residual, tol.angular);
  if (!leg2) return {ErrorKind::Unreachable, "leg 2"};

  const double b11 = g.l1() * g.l2() * std::sin(leg1->passive - leg1->actuated);
  const double b22 = g.l3() * g.l4() * std::sin(leg2->passive - leg2->actuated);
  if (std::abs(b11) <= tol.eps_b) return {ErrorKind::ModeBoundary, "leg 1 stretched or folded"};
  if (std::abs(b22) <= tol.eps_b) return {ErrorKind::ModeBoundary, "leg 2 stretched or folded"};

  FullConfig cfg{g, JointConfig(leg1->actuated, leg2->actuated), PassiveAngles(leg1->passive, leg2->passive), p,
                 kNoFlags};
  return cfg;
}

inline FullConfig inverse_kinematics(const Geometry& g, const Point2& p, const WorkingMode& mode,
                                     const Tolerances& tol) {
  return try_inverse_kinematics(g, p, mode, tol).value();
}

inline FullConfig inverse_kinematics(const Geometry& g, const Point2& p, const WorkingMode& mode) {
  return inverse_kinematics(g, p, mode, Tolerances::for_geometry(g));
}

namespace detail {

struct CircleIntersection {
  bool exists = false;
  bool tangent = false;
  Point2 base;    // foot of the common chord on the centre line
  Vector2 offset; // half-chord vector, rotated +90 deg from the centre line
};

// Circles (c, rc) and (d, rd). The discriminant is evaluated in product form
// so that it stays accurate near tangency.
inline CircleIntersection intersect_circles(const Point2& c, double rc, const Point2& d, double rd, double tol) {
  CircleIntersection out;
  const Vector2 cd = d - c;
  const double dist = cd.norm();
  if (dist == 0.0) return out;
  const double h2 = (dist + rc + rd) * (rc + rd - dist) * (dist - rc + rd) * (dist + rc - rd) / (4.0 * dist * dist);
  if (h2 < -tol * tol) return out;
  const Vector2 u = cd / dist;
  const double along = (rc * rc - rd * rd + dist * dist) / (2.0 * dist);
  out.exists = true;
  out.base = c + along * u;
  if (h2 <= tol * tol) {
    out.tangent = true;
    out.offset = Vector2::Zero();
  } else {
    out.offset = std::sqrt(h2) * Vector2(-u.y(), u.x());
  }
  return out;
}

}  // namespace detail

// For the offset convention above det A = (p - c) x (p - d) = s * h * |CD|,
// so the assembly sign s coincides with sign(det A).
inline std::vector<FullConfig> forward_all(const Geometry& g, const JointConfig& q, const Tolerances& tol) {
  FullConfig probe{g, q, {}, Point2::Zero(), kNoFlags};
  const Point2 c = probe.c();
  const Point2 d = probe.d();
  const auto hit = detail::intersect_circles(c, g.l2(), d, g.l4(), tol.residual);
  std::vector<FullConfig> out;
  if (!hit.exists) return out;
  if (hit.tangent) {
    out.push_back(make_config(g, q, hit.base, kTangent));
    return out;
  }
  out.push_back(make_config(g, q, hit.base + hit.offset));
  out.push_back(make_config(g, q, hit.base - hit.offset));
  return out;
}

inline std::vector<FullConfig> forward_all(const Geometry& g, const JointConfig& q) {
  return forward_all(g, q, Tolerances::for_geometry(g));
}

inline Result<FullConfig> try_forward_kinematics(const Geometry& g, const JointConfig& q, AssemblyMode am,
                                                 const Tolerances& tol) {
  auto all = forward_all(g, q, tol);
  if (all.empty()) return {ErrorKind::NoAssembly, "distal circles do not meet"};
  if (all.size() == 1) return all.front();
  return am.sign == Sign::Positive ? all[0] : all[1];
}

inline FullConfig forward_kinematics(const Geometry& g, const JointConfig& q, AssemblyMode am, const Tolerances& tol) {
  return try_forward_kinematics(g, q, am, tol).value();
}

inline FullConfig forward_kinematics(const Geometry& g, const JointConfig& q, AssemblyMode am) {
  return forward_kinematics(g, q, am, Tolerances::for_geometry(g));
}

}  // namespace fivebar
