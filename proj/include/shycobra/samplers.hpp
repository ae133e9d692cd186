#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shycobra/belief.hpp"
#include "shycobra/kinematics.hpp"
#include "shycobra/particles.hpp"
#include "shycobra/random.hpp"
#include "shycobra/rrt.hpp"
#include "shycobra/values.hpp"
#include "shycobra/work_clock.hpp"
#include "shycobra/world.hpp"

namespace shycobra {

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Draw from N(mean, sd^2) restricted to [lo, hi] by inverting the CDF (bisection).
inline double truncated_normal(double mean, double sd, double lo, double hi, Rng& rng) {
  if (hi < lo) std::swap(lo, hi);
  if (sd <= 0.0) return std::clamp(mean, lo, hi);
  double a = (lo - mean) / sd, b = (hi - mean) / sd;
  bool mirrored = false;
  if (a > 0.0) {  // work in the lower tail, where the CDF keeps its precision
    std::tie(a, b) = std::pair{-b, -a};
    mirrored = true;
  }
  const double fa = std_normal_cdf(a), fb = std_normal_cdf(b);
  double z;
  if (!(fb > fa)) {
    z = a + uniform01(rng) * (b - a);
  } else {
    const double u = fa + uniform01(rng) * (fb - fa);
    double l = a, h = b;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (l + h);
      (std_normal_cdf(mid) < u ? l : h) = mid;
    }
    z = 0.5 * (l + h);
  }
  if (mirrored) z = -z;
  return mean + sd * z;
}

inline std::size_t pick_component(const ObjectBelief& b, Rng& rng) {
  double u = uniform01(rng), acc = 0.0;
  for (std::size_t i = 0; i < b.components.size(); ++i) {
    acc += b.components[i].mass;
    if (u < acc) return i;
  }
  return b.components.size() - 1;
}

}  // namespace detail

/// M poses from an object's belief. A component's container is drawn by mass; within it the
/// position is N(mean, std^2) truncated to where a disc of `radius` fits in the container
/// rectangle (untruncated when the component has no container). Orientation is left at the mean.
inline ParticleSet<Pose2> pose_sampler(const ObjectBelief& belief, const WorldGeometry& world, std::size_t m,
                                       Rng& rng, double radius = 0.0) {
  if (belief.components.empty()) throw GeneratorError("object has an empty pose belief");
  std::vector<Pose2> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = belief.components[detail::pick_component(belief, rng)];
    Pose2 p = c.mean;
    if (const Region* r = c.container.empty() ? nullptr : world.find_region(c.container)) {
      Rect fit = r->rect.inset(radius);
      if (fit.empty()) fit = Rect{r->rect.center().x, r->rect.center().y, r->rect.center().x, r->rect.center().y};
      p.x = detail::truncated_normal(c.mean.x, c.std, fit.min_x, fit.max_x, rng);
      p.y = detail::truncated_normal(c.mean.y, c.std, fit.min_y, fit.max_y, rng);
    } else {
      p.x += gaussian(rng, c.std);
      p.y += gaussian(rng, c.std);
    }
    out.push_back(p);
  }
  return ParticleSet<Pose2>::uniform(std::move(out));
}

/// Target poses for placing a disc of `radius` in `region`: uniform over the positions where the
/// footprint fits (the centre when it does not fit at all).
inline ParticleSet<Pose2> placement_sampler(const Region& region, double radius, std::size_t m, Rng& rng) {
  const Rect a = region.rect.inset(radius);
  std::vector<Pose2> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (a.empty()) {
      out.push_back({region.rect.center().x, region.rect.center().y, 0.0});
    } else {
      out.push_back({a.min_x + uniform01(rng) * a.width(), a.min_y + uniform01(rng) * a.height(), 0.0});
    }
  }
  return ParticleSet<Pose2>::uniform(std::move(out));
}

struct GraspSamplerOptions {
  double approach_length = 0.08;  // m of free space the gripper needs beyond the rim
  std::size_t max_tries = 64;
  std::optional<Vec2> facing;  // robot base; bearings then spread around the direction towards it
  double facing_spread = 0.6;  // rad
};

/// True when the gripper's approach ray at world bearing `bearing` hits an obstacle or leaves the world.
inline bool approach_blocked(Vec2 center, double radius, double bearing, const WorldGeometry& world,
                             const GraspSamplerOptions& opt = {}) {
  const Vec2 end = center + unit(bearing) * (radius + opt.approach_length);
  return world.segment_clearance(center, end) <= 0.0;
}

/// One rim grasp per pose particle (round-robin), with an approach bearing that is not blocked at
/// that particle: uniform, or N(direction to `facing`, spread²) when a base is given. Falls back
/// to the last draw when every bearing is blocked.
inline ParticleSet<Grasp> grasp_sampler(const ParticleSet<Pose2>& poses, const ObjectModel& object,
                                        const WorldGeometry& world, std::size_t m, Rng& rng,
                                        const GraspSamplerOptions& opt = {}) {
  if (poses.size() == 0) throw GeneratorError("grasp sampler needs pose particles");
  std::vector<Grasp> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Pose2& p = poses[i % poses.size()].value;
    double bearing = 0.0;
    for (std::size_t t = 0; t < opt.max_tries; ++t) {
      if (opt.facing) {
        const Vec2 d = *opt.facing - p.position();
        bearing = wrap_angle(std::atan2(d.y, d.x) + gaussian(rng, opt.facing_spread));
      } else {
        bearing = (2.0 * uniform01(rng) - 1.0) * std::numbers::pi;
      }
      work::add();
      if (!approach_blocked(p.position(), object.radius, bearing, world, opt)) break;
    }
    out.push_back(rim_grasp(object.radius, wrap_angle(bearing - p.theta)));
  }
  return ParticleSet<Grasp>::uniform(std::move(out));
}

/// Robot at the station of `location` with the arm tucked.
inline Config station_config(const WorldGeometry& world, const std::string& location) {
  return world.arm.tucked_at(world.station(location));
}

/// Configuration particles reaching p_i ∘ g_i from the base at `base`. Particle i tries pose i and
/// grasp i (round-robin), alternating IK branches; a pair that is unreachable, outside joint
/// limits or within `margin` of an obstacle is replaced by a randomly drawn pair. `targets_out`, when given,
/// receives the (pose, grasp) index used by each particle.
inline ParticleSet<Config> ik_sampler(const ParticleSet<Pose2>& poses, const ParticleSet<Grasp>& grasps, Vec2 base,
                                      const WorldGeometry& world, std::size_t m, Rng& rng,
                                      std::vector<std::size_t>* targets_out = nullptr, double margin = 0.005) {
  if (poses.size() == 0 || grasps.size() == 0) throw GeneratorError("IK sampler needs pose and grasp particles");
  const std::size_t n = std::max(poses.size(), grasps.size());
  auto solve = [&](std::size_t k, std::size_t branch) -> std::optional<Config> {
    work::add();
    const Pose2 target = compose(poses[k % poses.size()].value, grasps[k % grasps.size()].value.offset);
    auto sols = inverse_kinematics(target, base, world.arm);
    if (sols.empty()) return std::nullopt;
    for (std::size_t s = 0; s < sols.size(); ++s) {
      const Config& q = sols[(branch + s) % sols.size()];
      work::add();
      if (world.arm.within_limits(q) && world.config_clearance(q) > margin) return q;
    }
    return std::nullopt;
  };
  std::vector<Config> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t k = i % n;
    auto q = solve(k, i % 2);
    for (std::size_t t = 0; !q && t < 4 * n; ++t) {
      k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
      q = solve(k, i % 2);
    }
    if (!q) continue;
    out.push_back(*q);
    if (targets_out) targets_out->push_back(k);
  }
  if (out.empty()) throw GeneratorError("no reachable grasp target");
  for (std::size_t i = 0; out.size() < m; ++i) {
    out.push_back(out[i]);
    if (targets_out) targets_out->push_back((*targets_out)[i]);
  }
  return ParticleSet<Config>::uniform(std::move(out));
}

struct SubSample {
  Config value;
  double density;
};

/// J Gaussian perturbations of the arm joints of `mean` with per-joint std `sd`, each paired with
/// its density value under N(mean, sd^2 I). With sd = 0 the mean itself is returned once, with density 1.
inline std::vector<SubSample> draw_config_subsamples(const Config& mean, double sd, std::size_t j, Rng& rng) {
  if (sd <= 0.0) return {{mean, 1.0}};
  std::vector<SubSample> out;
  out.reserve(j);
  const double norm1 = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t k = 0; k < j; ++k) {
    Config q = mean;
    double density = 1.0;
    for (std::size_t d = Config::kShoulder; d < Config::kDim; ++d) {
      const double e = gaussian(rng, sd);
      q[d] += e;
      density *= norm1 * std::exp(-0.5 * (e / sd) * (e / sd));
    }
    out.push_back({q, density});
  }
  return out;
}

struct TrajectorySamplerOptions {
  RrtOptions rrt;
  std::size_t retries = 3;  // alternative random pairs tried when a pair fails
  bool base_only = false;   // plan over the base coordinates (arm held fixed)
};

/// M trajectories joining start_i to goal_i (round-robin over both sets). With `held`, pair i
/// carries grasp i of the held disc of `held_radius`. A pair that fails is replaced by random
/// pairs; slots that still fail reuse successful trajectories. Throws GeneratorError if no pair
/// can be connected.
inline ParticleSet<Trajectory> trajectory_sampler(const ParticleSet<Config>& starts, const ParticleSet<Config>& goals,
                                                  const WorldGeometry& world, std::size_t m, Rng& rng,
                                                  const TrajectorySamplerOptions& opt = {},
                                                  const ParticleSet<Grasp>* held = nullptr, double held_radius = 0.0) {
  if (starts.size() == 0 || goals.size() == 0) throw GeneratorError("trajectory sampler needs end configurations");
  if (held && held->size() == 0) throw GeneratorError("trajectory sampler got an empty grasp set");
  std::array<bool, Config::kDim> active{};
  if (opt.base_only) {
    active[Config::kBaseX] = active[Config::kBaseY] = true;
  } else {
    for (std::size_t d = Config::kShoulder; d < Config::kDim; ++d) active[d] = true;
  }
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n; };
  auto plan = [&](std::size_t s, std::size_t g, std::size_t k) {
    std::optional<Grasp> grasp;
    if (held) grasp = (*held)[k % held->size()].value;
    MotionValidator v(world, opt.rrt.safety_margin, grasp, held ? held_radius : 0.0);
    return rrt_connect(starts[s % starts.size()].value, goals[g % goals.size()].value, v, active, rng, opt.rrt);
  };
  std::vector<std::optional<Trajectory>> slots(m);
  for (std::size_t i = 0; i < m; ++i) {
    slots[i] = plan(i, i, i);
    for (std::size_t t = 0; !slots[i] && t < opt.retries; ++t) {
      const std::size_t k = pick(std::max({starts.size(), goals.size(), held ? held->size() : 1}));
      slots[i] = plan(k, k, k);
    }
  }
  std::vector<Trajectory> ok;
  for (const auto& s : slots)
    if (s) ok.push_back(*s);
  if (ok.empty()) throw GeneratorError("motion planning failed for every configuration pair");
  std::vector<Trajectory> out;
  out.reserve(m);
  std::size_t reuse = 0;
  for (auto& s : slots) out.push_back(s ? std::move(*s) : ok[reuse++ % ok.size()]);
  return ParticleSet<Trajectory>::uniform(std::move(out));
}

}  // namespace shycobra
