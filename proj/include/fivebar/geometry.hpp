#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "fivebar/errors.hpp"

namespace fivebar {

using Point2 = Eigen::Vector2d;
using Vector2 = Eigen::Vector2d;

// 2-D cross product (z component of the 3-D cross).
inline double cross(const Vector2& u, const Vector2& v) { return u.x() * v.y() - u.y() * v.x(); }

enum class Sign : std::int8_t { Negative = -1, Positive = 1 };

inline int to_int(Sign s) { return static_cast<int>(s); }
inline Sign flip(Sign s) { return s == Sign::Positive ? Sign::Negative : Sign::Positive; }
inline char sign_char(Sign s) { return s == Sign::Positive ? '+' : '-'; }

inline Sign parse_sign(std::string_view text) {
  if (text == "+" || text == "+1" || text == "1" || text == "P") return Sign::Positive;
  if (text == "-" || text == "-1" || text == "N") return Sign::Negative;
  throw ValidationError("sign", "expected '+' or '-', got '" + std::string(text) + "'");
}

// Link lengths of the RR-RRR five-bar. Leg 1 hangs from A = (0, 0) with the
// proximal link l1 = |AC| and distal link l2 = |CP|; leg 2 hangs from
// B = (l0, 0) with l3 = |BD| and l4 = |DP|.
class Geometry {
 public:
  Geometry(double l0, double l1, double l2, double l3, double l4) : l0_(l0), l1_(l1), l2_(l2), l3_(l3), l4_(l4) {
    check("l0", l0);
    check("l1", l1);
    check("l2", l2);
    check("l3", l3);
    check("l4", l4);
  }

  // The dimensions used throughout the examples and the atlas reproduction.
  static Geometry reference() { return Geometry(9.0, 8.0, 5.0, 5.0, 8.0); }

  double l0() const { return l0_; }
  double l1() const { return l1_; }
  double l2() const { return l2_; }
  double l3() const { return l3_; }
  double l4() const { return l4_; }

  Point2 a() const { return {0.0, 0.0}; }
  Point2 b() const { return {l0_, 0.0}; }

  double max_length() const { return std::max({l0_, l1_, l2_, l3_, l4_}); }

  double leg1_inner() const { return std::abs(l1_ - l2_); }
  double leg1_outer() const { return l1_ + l2_; }
  double leg2_inner() const { return std::abs(l3_ - l4_); }
  double leg2_outer() const { return l3_ + l4_; }

  // True when the two leg annuli overlap, i.e. some point is reachable by
  // both legs. A geometry without workspace is still representable so that
  // the atlas can report an empty table for it.
  bool has_workspace() const {
    // Distance range between a point of annulus 1 and the centre b spans
    // [max(0, inner1 - l0, l0 - outer1), l0 + outer1]; it must meet [inner2, outer2].
    const double lo = std::max({0.0, leg1_inner() - l0_, l0_ - leg1_outer()});
    const double hi = l0_ + leg1_outer();
    return lo <= leg2_outer() && hi >= leg2_inner();
  }

  void require_workspace() const {
    if (!has_workspace()) throw ValidationError("geometry", "leg annuli do not intersect; workspace is empty");
  }

  bool operator==(const Geometry&) const = default;

 private:
  static void check(const char* name, double v) {
    if (!std::isfinite(v) || v <= 0.0) throw ValidationError(name, "length must be positive and finite");
  }

  double l0_, l1_, l2_, l3_, l4_;
};

// Scale-aware thresholds. residual is a length; eps_a and eps_b carry the
// units of det A (length^2) and of the B diagonal entries (length^2).
struct Tolerances {
  double residual = 0.0;
  double eps_a = 0.0;
  double eps_b = 0.0;
  double angular = 1e-9;

  static Tolerances for_geometry(const Geometry& g) {
    Tolerances t;
    t.residual = 1e-9 * g.max_length();
    t.eps_a = 1e-9 * g.l2() * g.l4();
    t.eps_b = 1e-9 * std::max(g.l1() * g.l2(), g.l3() * g.l4());
    return t;
  }

  bool operator==(const Tolerances&) const = default;
};

// Sign vector of the diagonal inverse-kinematics entries, one per leg.
class WorkingMode {
 public:
  WorkingMode() = default;
  explicit WorkingMode(std::vector<Sign> signs) : signs_(std::move(signs)) {
    if (signs_.empty()) throw ValidationError("mode", "working mode needs at least one leg");
  }
  WorkingMode(std::initializer_list<Sign> signs) : WorkingMode(std::vector<Sign>(signs)) {}
  WorkingMode(Sign leg1, Sign leg2) : signs_{leg1, leg2} {}

  // "++", "+-", "-+", "--" and longer strings for more legs.
  static WorkingMode parse(std::string_view text) {
    std::vector<Sign> s;
    for (char ch : text) {
      if (ch == '+') s.push_back(Sign::Positive);
      else if (ch == '-') s.push_back(Sign::Negative);
      else throw ValidationError("mode", "invalid character in '" + std::string(text) + "'");
    }
    if (s.empty()) throw ValidationError("mode", "empty working mode");
    return WorkingMode(std::move(s));
  }

  std::size_t legs() const { return signs_.size(); }
  Sign operator[](std::size_t j) const { return signs_.at(j); }
  const std::vector<Sign>& signs() const { return signs_; }

  std::string str() const {
    std::string out;
    for (Sign s : signs_) out.push_back(sign_char(s));
    return out;
  }

  WorkingMode flipped() const {
    std::vector<Sign> s = signs_;
    for (Sign& x : s) x = flip(x);
    return WorkingMode(std::move(s));
  }

  bool operator==(const WorkingMode&) const = default;

 private:
  std::vector<Sign> signs_;
};

// The four modes of a two-legged machine, in ++, +-, -+, -- order.
inline std::vector<WorkingMode> five_bar_working_modes() {
  return {WorkingMode(Sign::Positive, Sign::Positive), WorkingMode(Sign::Positive, Sign::Negative),
          WorkingMode(Sign::Negative, Sign::Positive), WorkingMode(Sign::Negative, Sign::Negative)};
}

}  // namespace fivebar
