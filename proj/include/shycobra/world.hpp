#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shycobra/geometry.hpp"
#include "shycobra/kinematics.hpp"

namespace shycobra {

struct Obstacle {
  std::string name;
  Rect rect;
};

enum class RegionKind { kDrawer, kBasin, kSaucepan, kSurface, kPlate };

struct Region {
  std::string name;
  RegionKind kind = RegionKind::kSurface;
  std::string location;
  Rect rect;
};

struct ObjectModel {
  std::string name;
  double radius = 0.04;
  std::string region;  // initial support region
};

struct GripperTolerance {
  double position = 0.02;
  double angle = 0.35;
};

/// Static planar kitchen geometry loaded from a versioned JSON world file.
struct WorldGeometry {
  static constexpr int kSchemaVersion = 1;

  std::string name;
  Rect bounds{0.0, 0.0, 4.0, 3.0};
  std::string home;
  std::map<std::string, Vec2> stations;
  std::vector<Obstacle> obstacles;
  std::vector<Region> regions;
  std::vector<ObjectModel> objects;
  std::map<std::string, std::string> taps;  // tap -> location
  GripperTolerance tolerance;
  double joint_error_scale = 0.02;
  ArmModel arm;

  const Region& region(const std::string& n) const {
    for (const auto& r : regions)
      if (r.name == n) return r;
    throw std::out_of_range("unknown region '" + n + "'");
  }
  const Region* find_region(const std::string& n) const {
    for (const auto& r : regions)
      if (r.name == n) return &r;
    return nullptr;
  }
  const Region& first_region_of(RegionKind k) const {
    for (const auto& r : regions)
      if (r.kind == k) return r;
    throw std::out_of_range("world has no region of the requested kind");
  }
  std::vector<const Region*> regions_of(RegionKind k) const {
    std::vector<const Region*> out;
    for (const auto& r : regions)
      if (r.kind == k) out.push_back(&r);
    return out;
  }
  const ObjectModel& object(const std::string& n) const {
    for (const auto& o : objects)
      if (o.name == n) return o;
    throw std::out_of_range("unknown object '" + n + "'");
  }
  Vec2 station(const std::string& loc) const {
    auto it = stations.find(loc);
    if (it == stations.end()) throw std::out_of_range("unknown location '" + loc + "'");
    return it->second;
  }

  /// Signed clearance of a point from obstacles and the world boundary (negative = penetrating).
  double point_clearance(Vec2 p) const {
    double c = -signed_distance(p, bounds);
    for (const auto& o : obstacles) c = std::min(c, signed_distance(p, o.rect));
    return c;
  }

  double segment_clearance(Vec2 a, Vec2 b) const {
    // the world is convex, so boundary clearance is attained at an endpoint
    double c = std::min(-signed_distance(a, bounds), -signed_distance(b, bounds));
    for (const auto& o : obstacles) c = std::min(c, segment_rect_clearance(a, b, o.rect));
    return c;
  }

  /// Clearance of the robot body (base disc plus both arm links) at configuration `q`.
  double config_clearance(const Config& q) const {
    const auto pts = arm_points(q, arm);
    double c = point_clearance(pts.shoulder) - arm.base_radius;
    c = std::min(c, segment_clearance(pts.shoulder, pts.elbow) - arm.link_radius);
    c = std::min(c, segment_clearance(pts.elbow, pts.wrist) - arm.link_radius);
    return c;
  }

  /// As config_clearance, with a disc of `radius` rigidly held at grasp `grasp` (object frame
  /// pose of the end effector).
  double config_clearance_holding(const Config& q, const Pose2& grasp, double radius) const {
    double c = config_clearance(q);
    if (radius > 0.0) {
      const Pose2 obj = compose(forward_kinematics(q, arm), inverse(grasp));
      c = std::min(c, point_clearance(obj.position()) - radius);
    }
    return c;
  }

  bool inside_bounds(Vec2 p) const { return bounds.contains(p); }

  /// Copy of the geometry with every coordinate shifted by `d`.
  WorldGeometry translated(Vec2 d) const {
    WorldGeometry w = *this;
    w.bounds = bounds.translated(d);
    for (auto& [k, v] : w.stations) v = v + d;
    for (auto& o : w.obstacles) o.rect = o.rect.translated(d);
    for (auto& r : w.regions) r.rect = r.rect.translated(d);
    return w;
  }
};

namespace detail {

inline Rect rect_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("rectangle must be [min_x, min_y, max_x, max_y]");
  Rect r{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (r.empty()) throw std::invalid_argument("rectangle has negative extent");
  return r;
}

inline nlohmann::json rect_to_json(const Rect& r) { return {r.min_x, r.min_y, r.max_x, r.max_y}; }

inline RegionKind region_kind_from_string(const std::string& s) {
  if (s == "drawer") return RegionKind::kDrawer;
  if (s == "basin") return RegionKind::kBasin;
  if (s == "saucepan") return RegionKind::kSaucepan;
  if (s == "surface") return RegionKind::kSurface;
  if (s == "plate") return RegionKind::kPlate;
  throw std::invalid_argument("unknown region kind '" + s + "'");
}

inline std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::kDrawer: return "drawer";
    case RegionKind::kBasin: return "basin";
    case RegionKind::kSaucepan: return "saucepan";
    case RegionKind::kSurface: return "surface";
    case RegionKind::kPlate: return "plate";
  }
  return "surface";
}

}  // namespace detail

/// Parses a world file. Throws std::invalid_argument on schema errors or an unsupported version.
inline WorldGeometry parse_world(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("world file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != WorldGeometry::kSchemaVersion)
      throw std::invalid_argument("unsupported world schema_version " + j.at("schema_version").dump());
    WorldGeometry w;
    w.name = j.value("name", "world");
    w.bounds = detail::rect_from_json(j.at("bounds"));
    w.home = j.at("home").get<std::string>();
    for (const auto& [k, v] : j.at("stations").items()) w.stations[k] = {v.at(0).get<double>(), v.at(1).get<double>()};
    for (const auto& o : j.value("obstacles", nlohmann::json::array()))
      w.obstacles.push_back({o.at("name").get<std::string>(), detail::rect_from_json(o.at("rect"))});
    for (const auto& r : j.at("regions"))
      w.regions.push_back({r.at("name").get<std::string>(), detail::region_kind_from_string(r.at("kind")),
                           r.at("location").get<std::string>(), detail::rect_from_json(r.at("rect"))});
    for (const auto& o : j.at("objects"))
      w.objects.push_back({o.at("name").get<std::string>(), o.at("radius").get<double>(), o.at("region").get<std::string>()});
    for (const auto& t : j.value("taps", nlohmann::json::array()))
      w.taps[t.at("name").get<std::string>()] = t.at("location").get<std::string>();
    if (j.contains("gripper_tolerance")) {
      w.tolerance.position = j["gripper_tolerance"].at("position").get<double>();
      w.tolerance.angle = j["gripper_tolerance"].at("angle").get<double>();
    }
    w.joint_error_scale = j.value("joint_error_scale", w.joint_error_scale);
    if (j.contains("arm")) {
      const auto& a = j["arm"];
      if (a.contains("link_lengths")) w.arm.link_lengths = {a["link_lengths"].at(0).get<double>(), a["link_lengths"].at(1).get<double>()};
      w.arm.link_radius = a.value("link_radius", w.arm.link_radius);
      w.arm.base_radius = a.value("base_radius", w.arm.base_radius);
      if (a.contains("tucked"))
        w.arm.tucked = {a["tucked"].at(0).get<double>(), a["tucked"].at(1).get<double>(), a["tucked"].at(2).get<double>()};
    }
    if (w.arm.link_lengths[0] <= 0.0 || w.arm.link_lengths[1] <= 0.0)
      throw std::invalid_argument("link lengths must be positive");
    if (!w.stations.count(w.home)) throw std::invalid_argument("home location '" + w.home + "' has no station");
    for (const auto& r : w.regions)
      if (!w.stations.count(r.location))
        throw std::invalid_argument("region '" + r.name + "' refers to unknown location '" + r.location + "'");
    for (const auto& o : w.objects)
      if (!w.find_region(o.region)) throw std::invalid_argument("object '" + o.name + "' starts in unknown region");
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed world file: ") + e.what());
  }
}

inline std::string serialize_world(const WorldGeometry& w) {
  nlohmann::json j;
  j["schema_version"] = WorldGeometry::kSchemaVersion;
  j["name"] = w.name;
  j["bounds"] = detail::rect_to_json(w.bounds);
  j["home"] = w.home;
  for (const auto& [k, v] : w.stations) j["stations"][k] = {v.x, v.y};
  j["obstacles"] = nlohmann::json::array();
  for (const auto& o : w.obstacles) j["obstacles"].push_back({{"name", o.name}, {"rect", detail::rect_to_json(o.rect)}});
  for (const auto& r : w.regions)
    j["regions"].push_back({{"name", r.name}, {"kind", detail::to_string(r.kind)}, {"location", r.location},
                            {"rect", detail::rect_to_json(r.rect)}});
  for (const auto& o : w.objects) j["objects"].push_back({{"name", o.name}, {"radius", o.radius}, {"region", o.region}});
  j["taps"] = nlohmann::json::array();
  for (const auto& [t, loc] : w.taps) j["taps"].push_back({{"name", t}, {"location", loc}});
  j["gripper_tolerance"] = {{"position", w.tolerance.position}, {"angle", w.tolerance.angle}};
  j["joint_error_scale"] = w.joint_error_scale;
  j["arm"] = {{"link_lengths", {w.arm.link_lengths[0], w.arm.link_lengths[1]}},
              {"link_radius", w.arm.link_radius},
              {"base_radius", w.arm.base_radius},
              {"tucked", {w.arm.tucked[0], w.arm.tucked[1], w.arm.tucked[2]}}};
  return j.dump(2);
}

}  // namespace shycobra
