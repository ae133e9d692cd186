#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "shycobra/belief.hpp"
#include "shycobra/constraint_network.hpp"
#include "shycobra/kinematics.hpp"
#include "shycobra/kitchen_data.hpp"
#include "shycobra/random.hpp"
#include "shycobra/schema.hpp"
#include "shycobra/symbolic_planner.hpp"
#include "shycobra/world.hpp"

namespace shycobra {

enum class Task { kRetrieve, kWash, kCook, kServeMeal };

inline Task parse_task(const std::string& s) {
  if (s == "retrieve") return Task::kRetrieve;
  if (s == "wash") return Task::kWash;
  if (s == "cook") return Task::kCook;
  if (s == "serve-meal") return Task::kServeMeal;
  throw std::invalid_argument("unknown task '" + s + "'");
}

inline std::string to_string(Task t) {
  switch (t) {
    case Task::kRetrieve: return "retrieve";
    case Task::kWash: return "wash";
    case Task::kCook: return "cook";
    case Task::kServeMeal: return "serve-meal";
  }
  return "?";
}

inline std::vector<Literal> task_goal(Task t) {
  switch (t) {
    case Task::kRetrieve: return {{"holding", {"pear"}}};
    case Task::kWash: return {{"clean", {"pear"}}};
    case Task::kCook: return {{"cooked", {"pear"}}};
    case Task::kServeMeal: return {{"served", {"pear"}}};
  }
  return {};
}

/// Ground truth of the simulated kitchen.
struct WorldState {
  std::map<std::string, Pose2> poses;  // true object poses (held objects follow the gripper)
  Config config;
  std::optional<std::string> held;
  Grasp grasp;                         // actual end-effector offset in the held object's frame
  SymbolicState facts;                 // true atoms, static ones included

  std::optional<std::string> container(const std::string& obj) const {
    const std::string prefix = "(in " + obj + " ";
    for (const auto& a : facts)
      if (a.starts_with(prefix)) return a.substr(prefix.size(), a.size() - prefix.size() - 1);
    return std::nullopt;
  }
  bool closed(const std::string& region) const { return facts.count(make_atom("closed", {region})) > 0; }
};

struct PoseObservation {
  std::string object;
  std::string container;  // region the object was seen in
  Pose2 pose;
};

struct Observation {
  std::vector<PoseObservation> poses;
  std::vector<std::pair<std::string, std::string>> absent;  // (object, container) looked for and not seen
  std::optional<Config> config;
  SymbolicState added, removed;  // observed symbolic effects
  std::optional<Grasp> grasp;    // sensed grasp after a successful pick
};

/// Domain, geometry and planner for the kitchen.
struct Kitchen {
  WorldGeometry world;
  std::vector<ActionSchema> schemas;
  std::vector<std::string> objects;
  SymbolicState static_facts;

  Kitchen(WorldGeometry w, std::vector<ActionSchema> s) : world(std::move(w)), schemas(std::move(s)) {
    std::set<std::string> names;
    for (const auto& [loc, p] : world.stations) {
      names.insert(loc);
      static_facts.insert(make_atom("location", {loc}));
    }
    for (const auto& r : world.regions) {
      names.insert(r.name);
      static_facts.insert(make_atom("region-at", {r.name, r.location}));
      switch (r.kind) {
        case RegionKind::kDrawer: static_facts.insert(make_atom("drawer", {r.name})); break;
        case RegionKind::kBasin: static_facts.insert(make_atom("basin", {r.name})); break;
        case RegionKind::kSaucepan: static_facts.insert(make_atom("pan", {r.name})); break;
        case RegionKind::kPlate: static_facts.insert(make_atom("plate", {r.name})); break;
        case RegionKind::kSurface: break;
      }
      if (r.kind != RegionKind::kDrawer) {
        static_facts.insert(make_atom("accessible", {r.name}));
        static_facts.insert(make_atom("place-target", {r.name}));
      }
    }
    for (const auto& o : world.objects) {
      names.insert(o.name);
      static_facts.insert(make_atom("item", {o.name}));
      if (o.name == "cup") static_facts.insert(make_atom("container", {o.name}));
    }
    for (const auto& [t, loc] : world.taps) {
      names.insert(t);
      static_facts.insert(make_atom("tap", {t}));
      static_facts.insert(make_atom("tap-at", {t, loc}));
    }
    objects.assign(names.begin(), names.end());
  }

  static Kitchen builtin() {
    return Kitchen(parse_world(std::string(data::kKitchenWorld)), parse_domain(data::kKitchenDomain));
  }

  SymbolicPlanner planner() const { return SymbolicPlanner(schemas, objects); }

  bool is_static(const Atom& a) const { return static_facts.count(a) > 0; }
};

/// Symbolic state the planner sees: static facts, believed facts, and (maybe-in o d) for every
/// unlocated object and drawer holding some of its belief mass.
inline SymbolicState compile_state(const Kitchen& k, const Belief& b) {
  SymbolicState s = k.static_facts;
  s.insert(b.facts.begin(), b.facts.end());
  for (const auto& [obj, ob] : b.objects) {
    if (s.count(make_atom("located", {obj}))) continue;
    for (const auto& c : ob.components)
      if (c.mass > 0.0 && !c.container.empty()) s.insert(make_atom("maybe-in", {obj, c.container}));
  }
  return s;
}

struct Scenario {
  WorldState truth;
  Belief belief;
  std::vector<Literal> goal;
  std::string pear_drawer;
};

struct ScenarioOptions {
  NoiseModel noise;
  std::optional<std::string> pear_drawer;  // overrides the seeded choice
};

/// Seeded problem instance: the pear sits in a seed-chosen drawer (uniform over the footprint
/// positions that fit), the cup on its spot; the belief spreads the pear uniformly over the
/// drawers with pose components at the drawer centroids.
inline Scenario make_world(const Kitchen& k, Task task, std::uint64_t seed, const ScenarioOptions& opt = {}) {
  Rng rng = make_stream(seed, {0x5eed, static_cast<std::uint64_t>(task)});
  const auto drawers = k.world.regions_of(RegionKind::kDrawer);
  if (drawers.empty()) throw std::invalid_argument("world has no drawers");
  Scenario sc;
  sc.goal = task_goal(task);
  const std::size_t pick = std::min(drawers.size() - 1, static_cast<std::size_t>(uniform01(rng) * drawers.size()));
  sc.pear_drawer = opt.pear_drawer.value_or(drawers[pick]->name);

  auto place_in = [&](const std::string& obj, const std::string& region) {
    const Rect a = k.world.region(region).rect.inset(k.world.object(obj).radius);
    const Vec2 c = k.world.region(region).rect.center();
    sc.truth.poses[obj] = a.empty() ? Pose2{c.x, c.y, 0.0}
                                    : Pose2{a.min_x + uniform01(rng) * a.width(), a.min_y + uniform01(rng) * a.height(), 0.0};
    sc.truth.facts.insert(make_atom("in", {obj, region}));
  };
  sc.truth.facts = k.static_facts;
  for (const auto& o : k.world.objects) place_in(o.name, o.name == "pear" ? sc.pear_drawer : o.region);
  for (const auto* d : drawers) sc.truth.facts.insert(make_atom("closed", {d->name}));
  sc.truth.facts.insert(make_atom("robot-at", {k.world.home}));
  sc.truth.facts.insert("(handempty)");
  sc.truth.config = k.world.arm.tucked_at(k.world.station(k.world.home));

  Belief& b = sc.belief;
  b.config = sc.truth.config;
  b.config_std = opt.noise.config;
  for (const auto& o : k.world.objects) {
    ObjectBelief ob;
    if (o.name == "pear") {
      for (const auto* d : drawers)
        ob.components.push_back({d->name, 1.0 / static_cast<double>(drawers.size()),
                                 Pose2{d->rect.center().x, d->rect.center().y, 0.0}, opt.noise.pose});
    } else {
      const Vec2 c = k.world.region(o.region).rect.center();
      ob.components.push_back({o.region, 1.0, Pose2{c.x, c.y, 0.0}, opt.noise.pose});
      b.facts.insert(make_atom("located", {o.name}));
      b.facts.insert(make_atom("in", {o.name, o.region}));
    }
    b.objects[o.name] = ob;
  }
  for (const auto* d : drawers) b.facts.insert(make_atom("closed", {d->name}));
  b.facts.insert(make_atom("robot-at", {k.world.home}));
  b.facts.insert("(handempty)");
  return sc;
}

/// Visible object poses with N(0, δ_p²) noise per coordinate and the configuration with N(0, δ_c²)
/// per arm joint. Objects in closed drawers and held objects are not seen.
inline Observation observe(const Kitchen& k, const WorldState& w, const NoiseModel& noise, Rng& rng) {
  Observation o;
  for (const auto& [obj, pose] : w.poses) {
    if (w.held == obj) continue;
    const auto c = w.container(obj);
    if (!c || w.closed(*c)) continue;
    o.poses.push_back({obj, *c, Pose2{pose.x + gaussian(rng, noise.pose), pose.y + gaussian(rng, noise.pose), pose.theta}});
  }
  Config q = w.config;
  for (std::size_t d = Config::kShoulder; d < Config::kDim; ++d) q[d] += gaussian(rng, noise.config);
  o.config = q;
  (void)k;
  return o;
}

struct ExecutionResult {
  Observation observation;  // observed symbolic effects (poses and configuration come from observe)
  bool error = false;
};

/// Continuous values of an action's parameters, keyed by parameter name.
using ActionValues = std::map<std::string, Value>;

namespace detail {

/// Preconditions that concern the physical world; knowledge atoms and continuous bindings are skipped.
inline bool physically_applicable(const GroundAction& a, const SymbolicState& s) {
  for (const auto& l : a.schema->preconditions) {
    if (l.predicate == "located" || l.predicate == "maybe-in" || l.predicate == "at") continue;
    const auto atom = ground_literal(l, a);
    if (!atom) continue;
    if (l.negated == (s.count(*atom) > 0)) return false;
  }
  return true;
}

inline Config with_execution_noise(Config q, double sd, Rng& rng) {
  for (std::size_t d = Config::kShoulder; d < Config::kDim; ++d) q[d] += gaussian(rng, sd);
  return q;
}

inline const Config* config_value(const ActionValues& v) {
  for (const auto& [name, val] : v)
    if (const auto* q = std::get_if<Config>(&val)) return q;
  return nullptr;
}

}  // namespace detail

/// Executes `a` in the true world. Commanded configurations are reached with per-joint noise
/// N(0, (κ δ_c)²), κ = world.joint_error_scale. A pick succeeds iff the reached end-effector pose
/// is within gripper tolerance of the true grasp pose; a place succeeds iff the released footprint
/// lies inside the target region. Failed picks and places leave the world untouched except for
/// the arm configuration.
inline ExecutionResult execute_action(const Kitchen& k, WorldState& w, const GroundAction& a, const ActionValues& values,
                                      const NoiseModel& noise, Rng& rng) {
  ExecutionResult r;
  if (!detail::physically_applicable(a, w.facts)) {
    r.error = true;
    return r;
  }
  const double sd = k.world.joint_error_scale * noise.config;
  const Config* commanded = detail::config_value(values);
  if (commanded) w.config = detail::with_execution_noise(*commanded, sd, rng);

  auto apply = [&] {
    const SymbolicState before = w.facts;
    w.facts = apply_effects(a, w.facts);
    for (const auto& x : w.facts)
      if (!before.count(x)) r.observation.added.insert(x);
    for (const auto& x : before)
      if (!w.facts.count(x)) r.observation.removed.insert(x);
  };

  const std::string& name = a.name();
  if (name == "inspect") {
    const std::string obj = a.resolve("obj"), d = a.resolve("d");
    if (w.container(obj) == d && w.held != obj) {
      r.observation.added.insert(make_atom("located", {obj}));
      r.observation.added.insert(make_atom("in", {obj, d}));
    } else {
      r.observation.absent.emplace_back(obj, d);
    }
    return r;
  }
  if (name == "pick") {
    const std::string obj = a.resolve("obj");
    const Pose2 ee = forward_kinematics(w.config, k.world.arm);
    const auto& g = std::get<Grasp>(values.at("g"));
    const auto e = pose_error(ee, compose(w.poses.at(obj), g.offset));
    if (e.position > k.world.tolerance.position || e.angle > k.world.tolerance.angle) {
      r.error = true;
      return r;
    }
    w.held = obj;
    w.grasp = Grasp{compose(inverse(w.poses.at(obj)), ee)};
    r.observation.grasp = w.grasp;
    apply();
    return r;
  }
  if (name == "place") {
    const std::string obj = a.resolve("obj"), region = a.resolve("r");
    const Pose2 ee = forward_kinematics(w.config, k.world.arm);
    const Pose2 released = compose(ee, inverse(w.grasp.offset));
    const Rect admissible = k.world.region(region).rect.inset(k.world.object(obj).radius);
    if (admissible.empty() || !admissible.contains(released.position())) {
      r.error = true;
      return r;
    }
    w.poses[obj] = Pose2{released.x, released.y, 0.0};
    w.held.reset();
    apply();
    return r;
  }
  apply();
  return r;
}

/// Replacement update: absence zeroes the container's mass, a pose observation replaces the pose
/// belief (std δ_p), the configuration observation replaces the configuration mean (std δ_c), and
/// observed symbolic effects update the believed facts.
inline void update_belief(const Kitchen& k, Belief& b, const Observation& o, const NoiseModel& noise) {
  for (const auto& [obj, container] : o.absent) {
    auto& ob = b.objects.at(obj);
    for (auto& c : ob.components)
      if (c.container == container) c.mass = 0.0;
    ob.normalize();
  }
  for (const auto& x : o.removed)
    if (!k.is_static(x)) b.facts.erase(x);
  for (const auto& x : o.added)
    if (!k.is_static(x)) b.facts.insert(x);
  for (const auto& p : o.poses) {
    b.objects[p.object].components = {{p.container, 1.0, p.pose, noise.pose}};
    std::erase_if(b.facts, [&](const Atom& a) { return a.starts_with("(in " + p.object + " "); });
    b.facts.insert(make_atom("located", {p.object}));
    b.facts.insert(make_atom("in", {p.object, p.container}));
  }
  if (o.config) {
    b.config = *o.config;
    b.config_std = noise.config;
  }
  b.held.reset();
  for (const auto& x : b.facts)
    if (x.starts_with("(holding ")) b.held = x.substr(9, x.size() - 10);
  if (o.grasp) b.held_grasp = o.grasp;
  if (!b.held) b.held_grasp.reset();
}

}  // namespace shycobra
