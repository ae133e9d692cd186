#pragma once

#include <cmath>
#include <vector>

#include "shycobra/geometry.hpp"
#include "shycobra/kinematics.hpp"

namespace shycobra {

/// End-effector pose expressed in the object frame; composing it with an object pose gives the
/// world-frame gripper pose.
struct Grasp {
  Pose2 offset;

  double offset_distance() const { return std::hypot(offset.x, offset.y); }
  friend bool operator==(const Grasp&, const Grasp&) = default;
};

/// Grasp on a disc of `radius` approached from direction `approach` (object frame): the gripper
/// sits on the rim and faces the centre.
inline Grasp rim_grasp(double radius, double approach) {
  return Grasp{{radius * std::cos(approach), radius * std::sin(approach), wrap_angle(approach + 3.141592653589793)}};
}

/// Fixed-length waypoint list in configuration space.
struct Trajectory {
  std::vector<Config> waypoints;

  bool empty() const { return waypoints.empty(); }
  const Config& front() const { return waypoints.front(); }
  const Config& back() const { return waypoints.back(); }

  double length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) s += distance(waypoints[i - 1], waypoints[i]);
    return s;
  }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

inline constexpr std::size_t kDefaultWaypoints = 20;

/// Straight-line trajectory from a to b with `n` waypoints.
inline Trajectory straight_trajectory(const Config& a, const Config& b, std::size_t n = kDefaultWaypoints) {
  Trajectory t;
  t.waypoints.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    t.waypoints.push_back(interpolate(a, b, n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1)));
  return t;
}

}  // namespace shycobra
