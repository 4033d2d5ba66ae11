#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "fivebar/errors.hpp"
#include "fivebar/geometry.hpp"
#include "fivebar/kinematics.hpp"

namespace fivebar {

using Matrix2 = Eigen::Matrix2d;

// Velocity model A * p_dot = B * theta_dot. Each row of A is the direction of
// a distal link; B is diagonal with one entry per leg.
struct KinematicMatrices {
  Matrix2 a;
  Matrix2 b;

  double b11() const { return b(0, 0); }
  double b22() const { return b(1, 1); }
};

inline KinematicMatrices matrices(const FullConfig& cfg) {
  const Geometry& g = cfg.geometry;
  const Vector2 pc = cfg.p - cfg.c();
  const Vector2 pd = cfg.p - cfg.d();
  KinematicMatrices m;
  m.a << pc.x(), pc.y(), pd.x(), pd.y();
  m.b.setZero();
  m.b(0, 0) = g.l1() * g.l2() * std::sin(cfg.passive.theta3 - cfg.q.theta1);
  m.b(1, 1) = g.l3() * g.l4() * std::sin(cfg.passive.theta4 - cfg.q.theta2);
  return m;
}

inline double det_a(const KinematicMatrices& m) { return m.a(0, 0) * m.a(1, 1) - m.a(0, 1) * m.a(1, 0); }
inline double det_b(const KinematicMatrices& m) { return m.b(0, 0) * m.b(1, 1); }
inline double det_a(const FullConfig& cfg) { return det_a(matrices(cfg)); }
inline double det_b(const FullConfig& cfg) { return det_b(matrices(cfg)); }

enum class SingularityClass { Regular, Serial, Parallel, Both };

inline std::string_view to_string(SingularityClass c) {
  switch (c) {
    case SingularityClass::Regular: return "Regular";
    case SingularityClass::Serial: return "Serial";
    case SingularityClass::Parallel: return "Parallel";
    case SingularityClass::Both: return "Both";
  }
  return "Regular";
}

// Values exactly at a threshold count as singular.
inline SingularityClass classify_singularity(const FullConfig& cfg, const Tolerances& tol) {
  const auto m = matrices(cfg);
  const bool parallel = std::abs(det_a(m)) <= tol.eps_a;
  const bool serial = std::abs(m.b11()) <= tol.eps_b || std::abs(m.b22()) <= tol.eps_b;
  if (parallel && serial) return SingularityClass::Both;
  if (parallel) return SingularityClass::Parallel;
  if (serial) return SingularityClass::Serial;
  return SingularityClass::Regular;
}

inline SingularityClass classify_singularity(const FullConfig& cfg) {
  return classify_singularity(cfg, Tolerances::for_geometry(cfg.geometry));
}

inline Result<WorkingMode> try_working_mode_of(const FullConfig& cfg, const Tolerances& tol) {
  const auto m = matrices(cfg);
  if (std::abs(m.b11()) <= tol.eps_b || std::abs(m.b22()) <= tol.eps_b) return {ErrorKind::ModeBoundary, ""};
  return WorkingMode(m.b11() > 0 ? Sign::Positive : Sign::Negative, m.b22() > 0 ? Sign::Positive : Sign::Negative);
}

inline WorkingMode working_mode_of(const FullConfig& cfg, const Tolerances& tol) {
  return try_working_mode_of(cfg, tol).value();
}

inline WorkingMode working_mode_of(const FullConfig& cfg) {
  return working_mode_of(cfg, Tolerances::for_geometry(cfg.geometry));
}

// theta_dot = B^-1 A p_dot. Fails when a leg is at a serial singularity.
inline Vector2 solve_rates(const FullConfig& cfg, const Vector2& p_dot, const Tolerances& tol) {
  const auto m = matrices(cfg);
  if (std::abs(m.b11()) <= tol.eps_b || std::abs(m.b22()) <= tol.eps_b)
    throw KinematicError(ErrorKind::SingularSolve, "B");
  const Vector2 rhs = m.a * p_dot;
  return {rhs.x() / m.b11(), rhs.y() / m.b22()};
}

inline Vector2 solve_rates(const FullConfig& cfg, const Vector2& p_dot) {
  return solve_rates(cfg, p_dot, Tolerances::for_geometry(cfg.geometry));
}

// p_dot = A^-1 B theta_dot. Fails at a parallel singularity.
inline Vector2 solve_velocity(const FullConfig& cfg, const Vector2& q_dot, const Tolerances& tol) {
  const auto m = matrices(cfg);
  const double det = det_a(m);
  if (std::abs(det) <= tol.eps_a) throw KinematicError(ErrorKind::SingularSolve, "A");
  const Vector2 rhs = m.b * q_dot;
  // Cramer's rule; the 2x2 inverse written out keeps the result exact for q_dot = 0.
  return {(m.a(1, 1) * rhs.x() - m.a(0, 1) * rhs.y()) / det, (m.a(0, 0) * rhs.y() - m.a(1, 0) * rhs.x()) / det};
}

inline Vector2 solve_velocity(const FullConfig& cfg, const Vector2& q_dot) {
  return solve_velocity(cfg, q_dot, Tolerances::for_geometry(cfg.geometry));
}

// ---------------------------------------------------------------------------
// Working-mode combinatorics for a machine with an arbitrary diagonal B.

struct ModeEnumeration {
  std::uint64_t count = 0;
  std::vector<std::vector<int>> modes;  // posture index per leg, lexicographic
};

inline std::uint64_t count_working_modes(const std::vector<int>& postures_per_leg) {
  if (postures_per_leg.empty()) throw ValidationError("postures", "at least one leg is required");
  std::uint64_t count = 1;
  for (int n : postures_per_leg) {
    if (n < 1) throw ValidationError("postures", "every leg needs at least one posture");
    if (count > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n))
      throw ValidationError("postures", "mode count overflows");
    count *= static_cast<std::uint64_t>(n);
  }
  return count;
}

inline ModeEnumeration enumerate_working_modes(const std::vector<int>& postures_per_leg,
                                               std::uint64_t max_listed = 1u << 20) {
  ModeEnumeration out;
  out.count = count_working_modes(postures_per_leg);
  if (out.count > max_listed) throw ValidationError("postures", "too many modes to list");
  out.modes.reserve(out.count);
  std::vector<int> idx(postures_per_leg.size(), 0);
  for (std::uint64_t k = 0; k < out.count; ++k) {
    out.modes.push_back(idx);
    for (std::size_t j = idx.size(); j-- > 0;) {
      if (++idx[j] < postures_per_leg[j]) break;
      idx[j] = 0;
    }
  }
  return out;
}

// Binary postures map index 0 to '+' and 1 to '-'.
inline WorkingMode mode_from_indices(const std::vector<int>& idx) {
  std::vector<Sign> s;
  for (int i : idx) {
    if (i != 0 && i != 1) throw ValidationError("mode", "only binary postures map to sign vectors");
    s.push_back(i == 0 ? Sign::Positive : Sign::Negative);
  }
  return WorkingMode(std::move(s));
}

}  // namespace fivebar
