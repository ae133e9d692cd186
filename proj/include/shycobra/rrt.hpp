#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "shycobra/kinematics.hpp"
#include "shycobra/random.hpp"
#include "shycobra/values.hpp"
#include "shycobra/work_clock.hpp"
#include "shycobra/world.hpp"

namespace shycobra {

struct RrtOptions {
  double step = 0.1;               // rad (arm) / m (base) per extension
  std::size_t max_iterations = 2000;
  std::size_t shortcut_attempts = 50;
  std::size_t waypoints = kDefaultWaypoints;
  double safety_margin = 0.005;    // m of clearance required at every checked configuration
};

/// Validity checker for the robot (optionally holding a disc) against static geometry.
/// Along an accepted edge every point of the body keeps at least half the safety margin of clearance.
class MotionValidator {
 public:
  MotionValidator(const WorldGeometry& world, double margin, std::optional<Grasp> held = std::nullopt,
                  double held_radius = 0.0)
      : world_(world), margin_(margin), held_(held), held_radius_(held_radius) {}

  double clearance(const Config& q) const {
    work::add();
    if (!world_.arm.within_limits(q)) return -1.0;
    return held_ ? world_.config_clearance_holding(q, held_->offset, held_radius_) : world_.config_clearance(q);
  }

  bool valid(const Config& q) const { return clearance(q) > margin_; }

  /// Upper bound on how far any body point moves between a and b.
  double sweep_bound(const Config& a, const Config& b) const {
    const double lever = world_.arm.reach() + (held_ ? held_->offset_distance() + held_radius_ : 0.0);
    const double base = std::hypot(a[Config::kBaseX] - b[Config::kBaseX], a[Config::kBaseY] - b[Config::kBaseY]);
    const double d1 = std::abs(a[Config::kShoulder] - b[Config::kShoulder]);
    const double d2 = std::abs(a[Config::kElbow] - b[Config::kElbow]);
    const double d3 = std::abs(a[Config::kWrist] - b[Config::kWrist]);
    const double tail = world_.arm.link_lengths[1] + (held_ ? held_->offset_distance() + held_radius_ : 0.0);
    const double wrist = held_ ? held_->offset_distance() + held_radius_ : 0.0;
    return base + lever * d1 + tail * d2 + wrist * d3;
  }

  // conservative advancement: from a configuration with clearance c the body can sweep
  // c - margin/2 before anything comes closer than margin/2
  bool edge_valid(const Config& a, const Config& b) const {
    const double sweep = sweep_bound(a, b);
    if (!valid(b)) return false;
    double t = 0.0;
    while (t < 1.0) {
      const double c = clearance(interpolate(a, b, t));
      if (!(c > margin_)) return false;
      if (sweep <= 0.0) break;
      t += (c - 0.5 * margin_) / sweep;
    }
    return true;
  }

  const WorldGeometry& world() const { return world_; }

 private:
  const WorldGeometry& world_;
  double margin_;
  std::optional<Grasp> held_;
  double held_radius_;
};

namespace detail {

struct Tree {
  std::vector<Config> nodes;
  std::vector<int> parent;

  std::size_t nearest(const Config& q) const {
    std::size_t best = 0;
    double bd = distance(nodes[0], q);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double d = distance(nodes[i], q);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return best;
  }
  std::vector<Config> path_to_root(std::size_t i) const {
    std::vector<Config> out;
    for (int k = static_cast<int>(i); k >= 0; k = parent[k]) out.push_back(nodes[k]);
    return out;
  }
};

enum class Extend { kTrapped, kAdvanced, kReached };

inline Extend extend(Tree& t, const Config& target, double step, const MotionValidator& v) {
  const std::size_t near = t.nearest(target);
  const Config& from = t.nodes[near];
  const double d = distance(from, target);
  const bool reach = d <= step;
  const Config next = reach ? target : interpolate(from, target, step / d);
  if (!v.edge_valid(from, next)) return Extend::kTrapped;
  t.nodes.push_back(next);
  t.parent.push_back(static_cast<int>(near));
  return reach ? Extend::kReached : Extend::kAdvanced;
}

inline Extend connect(Tree& t, const Config& target, double step, const MotionValidator& v) {
  Extend r;
  do {
    r = extend(t, target, step, v);
  } while (r == Extend::kAdvanced);
  return r;
}

}  // namespace detail

/// Spreads `n` waypoints along a polyline, keeping every original vertex, so that each output
/// segment lies on the input path. Returns nullopt when the path has more than `n` vertices.
inline std::optional<Trajectory> reparameterize(const std::vector<Config>& path, std::size_t n) {
  if (path.empty() || n == 0) return std::nullopt;
  if (path.size() == 1) return straight_trajectory(path[0], path[0], n);
  if (path.size() > n) return std::nullopt;
  const std::size_t segments = path.size() - 1;
  std::vector<double> len(segments);
  double total = 0.0;
  for (std::size_t i = 0; i < segments; ++i) total += (len[i] = distance(path[i], path[i + 1]));
  // every segment gets at least one step; the remaining steps go by length (largest remainder)
  const std::size_t steps = n - 1;
  std::vector<std::size_t> alloc(segments, 1);
  std::size_t spare = steps - segments;
  if (spare > 0 && total > 0.0) {
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t used = 0;
    for (std::size_t i = 0; i < segments; ++i) {
      const double share = spare * len[i] / total;
      const auto whole = static_cast<std::size_t>(std::floor(share));
      alloc[i] += whole;
      used += whole;
      rem.emplace_back(share - static_cast<double>(whole), i);
    }
    std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; k < spare - used; ++k) ++alloc[rem[k % rem.size()].second];
  } else if (spare > 0) {
    alloc.back() += spare;
  }
  Trajectory t;
  t.waypoints.push_back(path[0]);
  for (std::size_t i = 0; i < segments; ++i)
    for (std::size_t k = 1; k <= alloc[i]; ++k)
      t.waypoints.push_back(interpolate(path[i], path[i + 1], static_cast<double>(k) / static_cast<double>(alloc[i])));
  return t;
}

namespace detail {

/// RRT-Connect over the `active` coordinates followed by random shortcutting.
inline std::optional<std::vector<Config>> search(const Config& start, const Config& goal, const MotionValidator& v,
                                                 const std::array<bool, Config::kDim>& active, Rng& rng,
                                                 const RrtOptions& opt) {
  if (v.edge_valid(start, goal)) return std::vector<Config>{start, goal};
  const auto& world = v.world();
  const auto& arm = world.arm;
  auto sample = [&] {
    Config q = start;
    if (active[Config::kBaseX]) q[Config::kBaseX] = world.bounds.min_x + uniform01(rng) * world.bounds.width();
    if (active[Config::kBaseY]) q[Config::kBaseY] = world.bounds.min_y + uniform01(rng) * world.bounds.height();
    for (std::size_t j = 0; j < 3; ++j)
      if (active[Config::kShoulder + j])
        q[Config::kShoulder + j] = arm.joint_min[j] + uniform01(rng) * (arm.joint_max[j] - arm.joint_min[j]);
    return q;
  };
  Tree a{{start}, {-1}}, b{{goal}, {-1}};
  bool from_start = true;
  std::vector<Config> path;
  for (std::size_t it = 0; it < opt.max_iterations && path.empty(); ++it) {
    const Config q = sample();
    if (extend(a, q, opt.step, v) != Extend::kTrapped) {
      const Config& added = a.nodes.back();
      if (connect(b, added, opt.step, v) == Extend::kReached) {
        auto pa = a.path_to_root(a.nodes.size() - 1);
        auto pb = b.path_to_root(b.nodes.size() - 1);
        std::reverse(pa.begin(), pa.end());
        pa.insert(pa.end(), pb.begin() + 1, pb.end());
        if (!from_start) std::reverse(pa.begin(), pa.end());
        path = std::move(pa);
      }
    }
    std::swap(a, b);
    from_start = !from_start;
  }
  if (path.empty()) return std::nullopt;
  for (std::size_t s = 0; s < opt.shortcut_attempts && path.size() > 2; ++s) {
    std::size_t i = static_cast<std::size_t>(uniform01(rng) * path.size());
    std::size_t j = static_cast<std::size_t>(uniform01(rng) * path.size());
    i = std::min(i, path.size() - 1);
    j = std::min(j, path.size() - 1);
    if (i > j) std::swap(i, j);
    if (j < i + 2) continue;
    if (v.edge_valid(path[i], path[j])) path.erase(path.begin() + static_cast<long>(i) + 1, path.begin() + static_cast<long>(j));
  }
  return path;
}

}  // namespace detail

/// Bidirectional RRT-Connect between two configurations. `active` marks which coordinates are
/// sampled; coordinates where start and goal differ are always active. When both base and arm
/// change, posture-then-base and base-then-posture decompositions (each part searched in its
/// own subspace) are tried before the full space. Returns
/// nullopt on failure (invalid endpoints or iteration budget exhausted).
inline std::optional<Trajectory> rrt_connect(const Config& start, const Config& goal, const MotionValidator& v,
                                             std::array<bool, Config::kDim> active, Rng& rng,
                                             const RrtOptions& opt = {}) {
  if (!v.valid(start) || !v.valid(goal)) return std::nullopt;
  bool base_moves = false, arm_moves = false;
  for (std::size_t i = 0; i < Config::kDim; ++i)
    if (std::abs(start[i] - goal[i]) > 1e-12) {
      active[i] = true;
      (i < Config::kShoulder ? base_moves : arm_moves) = true;
    }

  std::optional<std::vector<Config>> path;
  if (v.edge_valid(start, goal)) path = std::vector<Config>{start, goal};
  if (!path && base_moves && arm_moves) {
    std::array<bool, Config::kDim> base_only{}, arm_only{};
    base_only[Config::kBaseX] = base_only[Config::kBaseY] = true;
    for (std::size_t d = Config::kShoulder; d < Config::kDim; ++d) arm_only[d] = true;
    Config arm_first = start, base_first = goal;
    for (std::size_t d = Config::kShoulder; d < Config::kDim; ++d) {
      arm_first[d] = goal[d];
      base_first[d] = start[d];
    }
    auto staged = [&](const Config& mid, const std::array<bool, Config::kDim>& first,
                      const std::array<bool, Config::kDim>& second) -> std::optional<std::vector<Config>> {
      if (!v.valid(mid)) return std::nullopt;
      auto a = detail::search(start, mid, v, first, rng, opt);
      if (!a) return std::nullopt;
      auto b = detail::search(mid, goal, v, second, rng, opt);
      if (!b) return std::nullopt;
      a->insert(a->end(), b->begin() + 1, b->end());
      return a;
    };
    path = staged(arm_first, arm_only, base_only);
    if (!path) path = staged(base_first, base_only, arm_only);
  }
  if (!path) path = detail::search(start, goal, v, active, rng, opt);
  if (!path) return std::nullopt;
  // drop vertices until the path fits the waypoint budget, keeping only shortcuts that are valid
  for (std::size_t i = 1; path->size() > opt.waypoints && i + 1 < path->size();) {
    if (v.edge_valid((*path)[i - 1], (*path)[i + 1]))
      path->erase(path->begin() + static_cast<long>(i));
    else
      ++i;
  }
  return reparameterize(*path, opt.waypoints);
}

}  // namespace shycobra
