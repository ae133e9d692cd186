#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shycobra/geometry.hpp"
#include "shycobra/kinematics.hpp"
#include "shycobra/values.hpp"

namespace shycobra {

struct NoiseModel {
  double pose = 0.10;    // m, per planar coordinate
  double config = 0.25;  // rad, per arm joint
};

/// One mixture component of an object's pose belief: the object is in `container` (a region
/// name, or empty for "anywhere") with probability `mass`, at N(mean, std^2) per coordinate.
struct PoseComponent {
  std::string container;
  double mass = 1.0;
  Pose2 mean;
  double std = 0.0;
};

struct ObjectBelief {
  std::vector<PoseComponent> components;

  double mass_in(const std::string& container) const {
    double m = 0.0;
    for (const auto& c : components)
      if (c.container == container) m += c.mass;
    return m;
  }

  /// Drops zero-mass components and rescales the rest to sum to one.
  void normalize() {
    std::erase_if(components, [](const PoseComponent& c) { return !(c.mass > 0.0); });
    double total = 0.0;
    for (const auto& c : components) total += c.mass;
    if (total > 0.0)
      for (auto& c : components) c.mass /= total;
  }

  /// Highest-mass component (first on ties).
  const PoseComponent& most_likely() const {
    return *std::max_element(components.begin(), components.end(),
                             [](const PoseComponent& a, const PoseComponent& b) { return a.mass < b.mass; });
  }
};

struct Belief {
  std::map<std::string, ObjectBelief> objects;
  Config config;               // believed robot configuration (mean)
  double config_std = 0.0;     // per arm joint
  std::optional<std::string> held;
  std::optional<Grasp> held_grasp;
  std::set<std::string> facts;  // dynamic symbolic atoms believed true
};

}  // namespace shycobra
