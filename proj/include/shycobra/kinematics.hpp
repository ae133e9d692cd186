#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "shycobra/geometry.hpp"

namespace shycobra {

/// Mobile planar manipulator configuration: base position (m) followed by shoulder, elbow and
/// wrist angles (rad).
struct Config {
  static constexpr std::size_t kDim = 5;
  static constexpr std::size_t kBaseX = 0, kBaseY = 1, kShoulder = 2, kElbow = 3, kWrist = 4;

  std::array<double, kDim> q{};

  double& operator[](std::size_t i) { return q[i]; }
  double operator[](std::size_t i) const { return q[i]; }
  Vec2 base() const { return {q[kBaseX], q[kBaseY]}; }
  friend bool operator==(const Config&, const Config&) = default;
};

inline Config make_config(Vec2 base, double shoulder, double elbow, double wrist) {
  return Config{{base.x, base.y, shoulder, elbow, wrist}};
}

/// Euclidean distance over all coordinates.
inline double distance(const Config& a, const Config& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < Config::kDim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double max_abs_difference(const Config& a, const Config& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < Config::kDim; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Config interpolate(const Config& a, const Config& b, double t) {
  Config c;
  for (std::size_t i = 0; i < Config::kDim; ++i) c[i] = a[i] + t * (b[i] - a[i]);
  return c;
}

/// Two-link planar arm with a zero-length wrist joint, mounted on a holonomic base.
struct ArmModel {
  std::array<double, 2> link_lengths{0.5, 0.5};
  std::array<double, 3> joint_min{-std::numbers::pi, -std::numbers::pi, -std::numbers::pi};
  std::array<double, 3> joint_max{std::numbers::pi, std::numbers::pi, std::numbers::pi};
  double link_radius = 0.02;
  double base_radius = 0.2;
  /// Arm joints while driving.
  std::array<double, 3> tucked{0.0, 2.6, 0.0};
  bool mobile_base = true;

  double reach() const { return link_lengths[0] + link_lengths[1]; }

  bool within_limits(const Config& c) const {
    for (std::size_t j = 0; j < 3; ++j) {
      const double v = c[Config::kShoulder + j];
      if (!std::isfinite(v) || v < joint_min[j] || v > joint_max[j]) return false;
    }
    return std::isfinite(c[Config::kBaseX]) && std::isfinite(c[Config::kBaseY]);
  }

  Config tucked_at(Vec2 base) const { return make_config(base, tucked[0], tucked[1], tucked[2]); }
};

/// Shoulder, elbow and wrist points of the arm.
struct ArmPoints {
  Vec2 shoulder, elbow, wrist;
};

inline ArmPoints arm_points(const Config& c, const ArmModel& arm) {
  const Vec2 s = c.base();
  const double a1 = c[Config::kShoulder];
  const double a12 = a1 + c[Config::kElbow];
  const Vec2 e = s + arm.link_lengths[0] * unit(a1);
  const Vec2 w = e + arm.link_lengths[1] * unit(a12);
  return {s, e, w};
}

/// End-effector pose in the world frame (base heading is fixed at zero).
inline Pose2 forward_kinematics(const Config& c, const ArmModel& arm) {
  const auto pts = arm_points(c, arm);
  return {pts.wrist.x, pts.wrist.y, wrap_angle(c[Config::kShoulder] + c[Config::kElbow] + c[Config::kWrist])};
}

/// Analytic IK for an end-effector pose with the base held at `base`. Returns elbow-down then
/// elbow-up solutions; a single solution at full extension; none when out of reach.
inline std::vector<Config> inverse_kinematics(const Pose2& target, Vec2 base, const ArmModel& arm) {
  const double l1 = arm.link_lengths[0], l2 = arm.link_lengths[1];
  const double dx = target.x - base.x, dy = target.y - base.y;
  const double d2 = dx * dx + dy * dy;
  const double outer = (l1 + l2) * (l1 + l2) - d2;
  const double inner = d2 - (l1 - l2) * (l1 - l2);
  std::vector<Config> out;
  constexpr double kSlack = 1e-12;
  if (outer < -kSlack || inner < -kSlack) return out;
  // half-angle form stays accurate near full extension and full fold
  const double elbow = 2.0 * std::atan2(std::sqrt(std::max(outer, 0.0)), std::sqrt(std::max(inner, 0.0)));
  const double heading = std::atan2(dy, dx);
  for (double q2 : {elbow, -elbow}) {
    const double q1 = wrap_angle(heading - std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2)));
    const double q3 = wrap_angle(target.theta - q1 - q2);
    Config c = make_config(base, q1, q2, q3);
    if (arm.within_limits(c)) out.push_back(c);
    if (elbow == 0.0) break;
  }
  return out;
}

}  // namespace shycobra
