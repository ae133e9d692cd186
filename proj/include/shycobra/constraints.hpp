#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "shycobra/kinematics.hpp"
#include "shycobra/values.hpp"
#include "shycobra/world.hpp"

namespace shycobra {

/// Constants and kernel scales shared by the constraint functions.
struct ConstraintParams {
  double c1 = 1.0;                 // clearance term weight
  double c2 = 1.0;                 // reach term weight
  double reach_floor = 1e-4;       // m, lower clamp on the reach distance
  double clearance_cap = 1.0;      // m, per-waypoint clearance cap
  double kin_position_scale = 0.02;
  double kin_angle_scale = 0.1;
  double motion_lambda = 1.0;
  double motion_endpoint_scale = 0.05;
  double stable_scale = 0.01;
  double grasp_radius_scale = 0.005;
  double grasp_alignment_scale = 0.25;
};

inline double gaussian_kernel(double error, double scale) { return std::exp(-0.5 * (error / scale) * (error / scale)); }

/// Kinematic feasibility of holding an object at pose `p` with grasp `g` in configuration `phi`.
inline double sigma_kin(const Config& phi, const Pose2& p, const Grasp& g, const ArmModel& arm,
                        const ConstraintParams& k = {}) {
  if (!arm.within_limits(phi)) return 0.0;
  const auto e = pose_error(forward_kinematics(phi, arm), compose(p, g.offset));
  const double a = e.position / k.kin_position_scale;
  const double b = e.angle / k.kin_angle_scale;
  return std::exp(-0.5 * (a * a + b * b));
}

/// The same grasp must be feasible both where the object is picked and where it is placed.
inline double sigma_grasp(const Config& phi0, const Pose2& p0, const Grasp& g0, const Config& phi1, const Pose2& p1,
                          const ArmModel& arm, const ConstraintParams& k = {}) {
  return sigma_kin(phi0, p0, g0, arm, k) * sigma_kin(phi1, p1, g0, arm, k);
}

/// Prefers the shortest trajectory joining the two configurations.
inline double sigma_motion(const Config& a, const Config& b, const Trajectory& tau, const ConstraintParams& k = {}) {
  if (tau.empty()) return 0.0;
  const double excess = std::max(0.0, tau.length() - distance(a, b));
  const double ends = gaussian_kernel(distance(tau.front(), a), k.motion_endpoint_scale) *
                      gaussian_kernel(distance(tau.back(), b), k.motion_endpoint_scale);
  return std::exp(-excess / k.motion_lambda) * ends;
}

namespace detail {

template <class Clearance>
double cfree_weight(const Trajectory& tau, const WorldGeometry& world, const std::optional<Pose2>& reach_target,
                    const ConstraintParams& k, Clearance&& clearance) {
  if (tau.empty()) return 0.0;
  double eps1 = 0.0;
  for (const auto& w : tau.waypoints) {
    if (!world.inside_bounds(w.base()) || !world.arm.within_limits(w)) return 0.0;
    eps1 += std::clamp(clearance(w), 0.0, k.clearance_cap);
  }
  double reach = 0.0;
  if (reach_target) {
    const double eps2 = pose_error(forward_kinematics(tau.back(), world.arm), *reach_target).position;
    reach = 1.0 / std::max(eps2, k.reach_floor);
  }
  return k.c1 * eps1 + k.c2 * reach;
}

}  // namespace detail

/// Collision-free trajectory weight: C1 * (capped cumulative clearance) + C2 / (reach distance),
/// where the reach distance is between the end effector after `tau` and `reach_target` (the
/// world-frame grasp pose). Without a target the reach term is omitted.
inline double sigma_cfree(const Trajectory& tau, const WorldGeometry& world, const std::optional<Pose2>& reach_target,
                          const ConstraintParams& k = {}) {
  return detail::cfree_weight(tau, world, reach_target, k, [&](const Config& q) { return world.config_clearance(q); });
}

/// As sigma_cfree, with the held disc of `radius` swept along at grasp `g`.
inline double sigma_cfreeH(const Trajectory& tau, const Grasp& g, double radius, const WorldGeometry& world,
                           const std::optional<Pose2>& reach_target, const ConstraintParams& k = {}) {
  return detail::cfree_weight(tau, world, reach_target, k,
                              [&](const Config& q) { return world.config_clearance_holding(q, g.offset, radius); });
}

/// Footprint of a disc at `p` inside `region`: 1 when fully inside, decaying exponentially with the
/// distance the centre lies outside the admissible area; 0 outside the world.
inline double sigma_stable(const Pose2& p, const Rect& region, double radius, const WorldGeometry& world,
                           const ConstraintParams& k = {}) {
  if (!world.inside_bounds(p.position())) return 0.0;
  const Rect admissible = region.inset(radius);
  double outside;
  if (admissible.empty())
    outside = norm(p.position() - region.center());
  else
    outside = std::max(0.0, signed_distance(p.position(), admissible));
  return std::exp(-outside / k.stable_scale);
}

/// Stable placement inside the first region of `kind` (basin, saucepan).
inline double sigma_in_region(const Pose2& p, RegionKind kind, double radius, const WorldGeometry& world,
                              const ConstraintParams& k = {}) {
  return sigma_stable(p, world.first_region_of(kind).rect, radius, world, k);
}

/// Rim grasp quality for a disc: offset at the rim, gripper facing the centre.
inline double sigma_graspH(const Grasp& g, const ObjectModel& object, const ConstraintParams& k = {}) {
  const double radial = std::abs(g.offset_distance() - object.radius);
  const double inward = std::atan2(-g.offset.y, -g.offset.x);
  const double misalign = wrap_angle(g.offset.theta - inward);
  return gaussian_kernel(radial, k.grasp_radius_scale) * gaussian_kernel(misalign, k.grasp_alignment_scale);
}

}  // namespace shycobra
