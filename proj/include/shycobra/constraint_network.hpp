#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <type_traits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "shycobra/belief.hpp"
#include "shycobra/constraints.hpp"
#include "shycobra/pmpnbp.hpp"
#include "shycobra/samplers.hpp"
#include "shycobra/schema.hpp"
#include "shycobra/symbolic_planner.hpp"
#include "shycobra/work_clock.hpp"
#include "shycobra/world.hpp"

namespace shycobra {

using Value = std::variant<Config, Pose2, Grasp, Trajectory>;

enum class ConstraintKind { kMotion, kKin, kCFree, kCFreeH, kGraspH, kGrasp, kStable, kInBasin, kInSaucepan };

inline ConstraintKind constraint_kind(const std::string& name) {
  static const std::map<std::string, ConstraintKind> kinds = {
      {"Motion", ConstraintKind::kMotion}, {"Kin", ConstraintKind::kKin},       {"CFree", ConstraintKind::kCFree},
      {"CFreeH", ConstraintKind::kCFreeH}, {"GraspH", ConstraintKind::kGraspH}, {"Grasp", ConstraintKind::kGrasp},
      {"Stable", ConstraintKind::kStable}, {"InBasin", ConstraintKind::kInBasin},
      {"InSaucepan", ConstraintKind::kInSaucepan}};
  auto it = kinds.find(name);
  if (it == kinds.end()) throw std::invalid_argument("unknown constraint '" + name + "'");
  return it->second;
}

/// How a variable's initial particles are generated.
enum class VariableRole {
  kInitialConfig,  // robot configuration belief (anchored)
  kStationConfig,  // base at a station, arm tucked
  kReachConfig,    // IK to pose ∘ grasp
  kBeliefPose,     // object pose belief (anchored)
  kTargetPose,     // placement inside a region
  kFreshGrasp,     // grasp sampler at the object's pose particles
  kHeldGrasp,      // grasp of the object already in hand (anchored)
  kTrajectory,
};

struct VariableMeta {
  ParamKind kind = ParamKind::kConfig;
  VariableRole role = VariableRole::kInitialConfig;
  std::size_t step = 0;
  std::string object;    // poses and grasps
  std::string location;  // station for configurations
  std::string region;    // target region of placement poses
  std::optional<std::size_t> pose, grasp;           // reach configs and fresh grasps
  std::optional<std::size_t> start, goal;           // trajectories
  std::optional<std::size_t> held_grasp;            // trajectories executed while holding
  std::string held_object;
};

struct FactorMeta {
  ConstraintKind kind = ConstraintKind::kMotion;
  std::string object;
  std::string region;
  std::optional<std::size_t> reach_pose, reach_grasp;  // collision factors of reaching actions
};

/// Factor graph for a plan skeleton with metadata for generators and potentials.
struct ConstraintNetwork {
  FactorGraph<Value> graph;
  std::vector<VariableMeta> variables;
  std::vector<FactorMeta> factors;
  std::map<std::pair<std::size_t, std::string>, std::size_t> alias;  // (action step, parameter) -> variable

  std::size_t variable(const std::string& name) const {
    for (std::size_t i = 0; i < graph.variables.size(); ++i)
      if (graph.variables[i].name == name) return i;
    throw std::out_of_range("no variable '" + name + "'");
  }
  std::optional<std::size_t> find_variable(const std::string& name) const {
    for (std::size_t i = 0; i < graph.variables.size(); ++i)
      if (graph.variables[i].name == name) return i;
    return std::nullopt;
  }
  /// Variable bound to continuous parameter `param` of action `step` (1-based).
  std::size_t parameter(std::size_t step, const std::string& param) const { return alias.at({step, param}); }

  /// Text dump: one line per variable, factor and edge.
  std::string dump() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < graph.variables.size(); ++i) {
      const auto& v = graph.variables[i];
      os << "variable " << v.name << ' ' << to_string(variables[i].kind) << (v.anchored ? " anchored" : "") << '\n';
    }
    for (const auto& f : graph.factors) {
      os << "factor " << f.name << " arity " << f.scope.size() << '\n';
    }
    for (const auto& f : graph.factors)
      for (auto x : f.scope) os << "edge " << graph.variables[x].name << " -- " << f.name << '\n';
    return os.str();
  }
};

namespace detail {

inline std::optional<std::string> robot_location(const SymbolicState& s) {
  const std::string prefix = "(robot-at ";
  for (const auto& a : s)
    if (a.starts_with(prefix)) return a.substr(prefix.size(), a.size() - prefix.size() - 1);
  return std::nullopt;
}

inline std::optional<std::string> held_object(const SymbolicState& s) {
  const std::string prefix = "(holding ";
  for (const auto& a : s)
    if (a.starts_with(prefix)) return a.substr(prefix.size(), a.size() - prefix.size() - 1);
  return std::nullopt;
}

/// Object a pose/grasp parameter belongs to: the first binding of a constraint mentioning it.
inline std::optional<std::string> owner(const GroundAction& a, const std::string& param) {
  for (const auto& c : a.schema->constraints) {
    if (c.bindings.empty()) continue;
    for (const auto& arg : c.args)
      if (arg == param) return a.resolve(c.bindings[0]);
  }
  return std::nullopt;
}

/// Region a pose parameter is constrained to lie in (second binding of its Stable constraint).
inline std::optional<std::string> support_region(const GroundAction& a, const std::string& param) {
  for (const auto& c : a.schema->constraints)
    if (c.name == "Stable" && c.bindings.size() >= 2 && c.args.size() == 1 && c.args[0] == param)
      return a.resolve(c.bindings[1]);
  return std::nullopt;
}

}  // namespace detail

/// Builds the constraint network of `skeleton` executed from symbolic state `state`.
/// Variables: one anchored initial configuration, one configuration per action with a
/// configuration parameter, object poses aliased until the object is moved, grasps shared between
/// a pick and its place. Factors: every schema constraint, a Motion factor per consecutive
/// configuration pair, and a Grasp factor per pick/place pair.
inline ConstraintNetwork build_network(const PlanSkeleton& skeleton, const SymbolicState& state) {
  if (skeleton.actions.empty()) throw std::invalid_argument("cannot build a network for an empty skeleton");
  ConstraintNetwork net;
  auto add_var = [&](std::string name, VariableMeta meta, bool anchored) {
    const std::size_t id = net.graph.add_variable(std::move(name), static_cast<int>(meta.kind), anchored);
    net.variables.push_back(std::move(meta));
    return id;
  };
  auto add_factor = [&](std::string name, ConstraintKind kind, std::vector<std::size_t> scope, FactorMeta meta) {
    meta.kind = kind;
    net.graph.add_factor(std::move(name), static_cast<int>(kind), std::move(scope));
    net.factors.push_back(std::move(meta));
  };

  // "o2", or "o2_cup" when "o2" is already used by another object
  auto unique = [&](const std::string& base, const std::string& obj) {
    return net.find_variable(base) ? base + "_" + obj : base;
  };

  SymbolicState s = state;
  VariableMeta phi0_meta;
  phi0_meta.kind = ParamKind::kConfig;
  phi0_meta.role = VariableRole::kInitialConfig;
  phi0_meta.location = detail::robot_location(s).value_or("");
  std::size_t current_config = add_var("phi0", phi0_meta, true);
  std::size_t current_step = 0;

  std::map<std::string, std::size_t> pose_of, grasp_of;
  struct PickRecord {
    std::size_t step, config, pose;
  };
  std::map<std::string, PickRecord> picked;

  for (std::size_t k = 1; k <= skeleton.actions.size(); ++k) {
    const GroundAction& a = skeleton.actions[k - 1];
    auto location = detail::robot_location(s);
    if (a.objects.count("loc")) location = a.objects.at("loc");
    const auto held = detail::held_object(s);
    const SymbolicState after = apply_effects(a, s);

    std::optional<std::size_t> phi, tau, pose, grasp;
    std::string pose_object, grasp_object;
    // poses and grasps first: configurations and trajectories refer to them
    for (const auto& p : a.schema->parameters) {
      if (p.kind == ParamKind::kPose) {
        const auto obj = detail::owner(a, p.name);
        if (!obj) throw std::invalid_argument(a.to_string() + ": pose '" + p.name + "' has no object to generate from");
        VariableMeta m;
        m.kind = ParamKind::kPose;
        m.step = k;
        m.object = *obj;
        if (held == *obj) {
          const auto region = detail::support_region(a, p.name);
          if (!region) throw std::invalid_argument(a.to_string() + ": target pose '" + p.name + "' has no region");
          m.role = VariableRole::kTargetPose;
          m.region = *region;
          pose_of[*obj] = add_var(unique("o" + std::to_string(k), *obj), m, false);
        } else if (!pose_of.count(*obj)) {
          m.role = VariableRole::kBeliefPose;
          m.step = 0;
          pose_of[*obj] = add_var(unique("o0", *obj), m, true);
        }
        pose = pose_of[*obj];
        pose_object = *obj;
        net.alias[{k, p.name}] = *pose;
      } else if (p.kind == ParamKind::kGrasp) {
        const auto obj = detail::owner(a, p.name);
        if (!obj) throw std::invalid_argument(a.to_string() + ": grasp '" + p.name + "' has no object to generate from");
        VariableMeta m;
        m.kind = ParamKind::kGrasp;
        m.step = k;
        m.object = *obj;
        if (held == *obj) {
          if (!grasp_of.count(*obj)) {
            m.role = VariableRole::kHeldGrasp;
            m.step = 0;
            grasp_of[*obj] = add_var(unique("g0", *obj), m, true);
          }
        } else {
          m.role = VariableRole::kFreshGrasp;
          grasp_of[*obj] = add_var(unique("g" + std::to_string(k), *obj), m, false);
        }
        grasp = grasp_of[*obj];
        grasp_object = *obj;
        net.alias[{k, p.name}] = *grasp;
      }
    }
    if (grasp && pose && net.variables[*grasp].role == VariableRole::kFreshGrasp) net.variables[*grasp].pose = *pose;

    for (const auto& p : a.schema->parameters) {
      if (p.kind != ParamKind::kConfig) continue;
      VariableMeta m;
      m.kind = ParamKind::kConfig;
      m.step = k;
      if (pose && grasp) {
        if (!location) throw std::invalid_argument(a.to_string() + ": robot location unknown for IK");
        m.role = VariableRole::kReachConfig;
        m.location = *location;
        m.pose = pose;
        m.grasp = grasp;
      } else {
        const auto dest = detail::robot_location(after);
        if (!dest) throw std::invalid_argument(a.to_string() + ": configuration '" + p.name + "' has no generator");
        m.role = VariableRole::kStationConfig;
        m.location = *dest;
      }
      phi = add_var("phi" + std::to_string(k), m, false);
      net.alias[{k, p.name}] = *phi;
    }
    for (const auto& p : a.schema->parameters) {
      if (p.kind != ParamKind::kTrajectory) continue;
      if (!phi) throw std::invalid_argument(a.to_string() + ": trajectory '" + p.name + "' without a target configuration");
      VariableMeta m;
      m.kind = ParamKind::kTrajectory;
      m.role = VariableRole::kTrajectory;
      m.step = k;
      m.start = current_config;
      m.goal = phi;
      if (held && grasp_of.count(*held)) {
        m.held_object = *held;
        m.held_grasp = grasp_of[*held];
      } else if (held) {
        VariableMeta gm;
        gm.kind = ParamKind::kGrasp;
        gm.role = VariableRole::kHeldGrasp;
        gm.object = *held;
        grasp_of[*held] = add_var(unique("g0", *held), gm, true);
        m.held_object = *held;
        m.held_grasp = grasp_of[*held];
      }
      tau = add_var("tau" + std::to_string(current_step) + std::to_string(k), m, false);
      net.alias[{k, p.name}] = *tau;
    }

    const std::string at = "@" + std::to_string(k);
    for (const auto& c : a.schema->constraints) {
      std::vector<std::size_t> scope;
      for (const auto& arg : c.args) scope.push_back(net.alias.at({k, arg}));
      FactorMeta fm;
      if (!c.bindings.empty()) fm.object = a.resolve(c.bindings[0]);
      if (c.bindings.size() >= 2) fm.region = a.resolve(c.bindings[1]);
      if (fm.object.empty() && c.name == "CFreeH" && held) fm.object = *held;
      if ((c.name == "CFree" || c.name == "CFreeH") && pose && grasp) {
        fm.reach_pose = pose;
        fm.reach_grasp = grasp;
      }
      add_factor(c.name + at, constraint_kind(c.name), std::move(scope), fm);
    }
    if (phi && tau) add_factor("Motion" + at, ConstraintKind::kMotion, {current_config, *phi, *tau}, {});
    if (phi && pose && grasp) {
      if (held == grasp_object && picked.count(grasp_object)) {
        const auto& pr = picked[grasp_object];
        FactorMeta fm;
        fm.object = grasp_object;
        add_factor("Grasp@" + std::to_string(pr.step) + "-" + std::to_string(k), ConstraintKind::kGrasp,
                   {pr.config, pr.pose, *grasp, *phi, *pose}, fm);
        picked.erase(grasp_object);
      } else if (held != grasp_object) {
        picked[grasp_object] = {k, *phi, *pose};
      }
    }
    if (phi) {
      current_config = *phi;
      current_step = k;
    }
    s = after;
  }
  return net;
}

struct InitOptions {
  std::size_t particles = 100;
  std::uint64_t seed = 0;
  bool determinize = false;  // collapse pose and configuration beliefs to their most likely values
  TrajectorySamplerOptions trajectories;
};

/// Populates every variable's initial particle set with the specialised generators.
inline void initialize(ConstraintNetwork& net, const Belief& belief, const WorldGeometry& world,
                       const InitOptions& opt) {
  const std::size_t m = opt.particles;
  auto& vars = net.graph.variables;
  auto rng_for = [&](std::size_t id) { return make_stream(opt.seed, {0x1717, id}); };

  std::vector<ParticleSet<Pose2>> pose_sets(vars.size());
  std::vector<ParticleSet<Grasp>> grasp_sets(vars.size());
  std::vector<ParticleSet<Config>> config_sets(vars.size());

  auto store = [&](std::size_t id, auto set) {
    ParticleSet<Value> out;
    out.reserve(set.size());
    for (const auto& p : set) out.push_back({Value{p.value}, p.weight});
    vars[id].belief = std::move(out);
  };

  auto run = [&](VariableRole role, auto&& fn) {
    for (std::size_t id = 0; id < vars.size(); ++id)
      if (net.variables[id].role == role) fn(id, net.variables[id]);
  };

  run(VariableRole::kInitialConfig, [&](std::size_t id, const VariableMeta&) {
    Rng rng = rng_for(id);
    std::vector<Config> qs;
    for (std::size_t i = 0; i < m; ++i) {
      Config q = belief.config;
      if (!opt.determinize)
        for (std::size_t d = Config::kShoulder; d < Config::kDim; ++d) q[d] += gaussian(rng, belief.config_std);
      qs.push_back(q);
    }
    config_sets[id] = ParticleSet<Config>::uniform(std::move(qs));
    store(id, config_sets[id]);
  });
  run(VariableRole::kBeliefPose, [&](std::size_t id, const VariableMeta& meta) {
    Rng rng = rng_for(id);
    auto it = belief.objects.find(meta.object);
    if (it == belief.objects.end()) throw GeneratorError("no belief for object '" + meta.object + "'");
    if (opt.determinize) {
      const auto& c = it->second.most_likely();
      pose_sets[id] = ParticleSet<Pose2>::uniform(std::vector<Pose2>(m, c.mean));
    } else {
      pose_sets[id] = pose_sampler(it->second, world, m, rng, world.object(meta.object).radius);
    }
    store(id, pose_sets[id]);
  });
  run(VariableRole::kTargetPose, [&](std::size_t id, const VariableMeta& meta) {
    Rng rng = rng_for(id);
    pose_sets[id] = placement_sampler(world.region(meta.region), world.object(meta.object).radius, m, rng);
    store(id, pose_sets[id]);
  });
  run(VariableRole::kFreshGrasp, [&](std::size_t id, const VariableMeta& meta) {
    Rng rng = rng_for(id);
    if (!meta.pose) throw GeneratorError("grasp '" + vars[id].name + "' has no pose to sample around");
    GraspSamplerOptions gopt;
    for (const auto& c : net.variables)
      if (c.role == VariableRole::kReachConfig && c.grasp == id) {
        gopt.facing = world.station(c.location);
        break;
      }
    grasp_sets[id] = grasp_sampler(pose_sets[*meta.pose], world.object(meta.object), world, m, rng, gopt);
    store(id, grasp_sets[id]);
  });
  run(VariableRole::kHeldGrasp, [&](std::size_t id, const VariableMeta& meta) {
    if (!belief.held_grasp || belief.held != meta.object)
      throw GeneratorError("no grasp belief for held object '" + meta.object + "'");
    grasp_sets[id] = ParticleSet<Grasp>::uniform(std::vector<Grasp>(m, *belief.held_grasp));
    store(id, grasp_sets[id]);
  });
  run(VariableRole::kStationConfig, [&](std::size_t id, const VariableMeta& meta) {
    config_sets[id] = ParticleSet<Config>::uniform(std::vector<Config>(m, station_config(world, meta.location)));
    store(id, config_sets[id]);
  });
  run(VariableRole::kReachConfig, [&](std::size_t id, const VariableMeta& meta) {
    Rng rng = rng_for(id);
    config_sets[id] = ik_sampler(pose_sets[*meta.pose], grasp_sets[*meta.grasp], world.station(meta.location), world, m,
                                 rng, nullptr, opt.trajectories.rrt.safety_margin);
    store(id, config_sets[id]);
  });
  run(VariableRole::kTrajectory, [&](std::size_t id, const VariableMeta& meta) {
    Rng rng = rng_for(id);
    const ParticleSet<Grasp>* held = meta.held_grasp ? &grasp_sets[*meta.held_grasp] : nullptr;
    const double radius = meta.held_grasp ? world.object(meta.held_object).radius : 0.0;
    auto topt = opt.trajectories;
    topt.base_only = net.variables[*meta.goal].role == VariableRole::kStationConfig;
    auto set = trajectory_sampler(config_sets[*meta.start], config_sets[*meta.goal], world, m, rng, topt, held, radius);
    store(id, set);
  });
}

/// Potentials, jitter kernels and convergence tolerances of a kitchen network.
struct KitchenModel {
  const ConstraintNetwork* net = nullptr;
  const WorldGeometry* world = nullptr;
  ConstraintParams params;
  double config_std = 0.0;      // sub-sample std for configuration targets (0 disables)
  std::size_t subsamples = 10;
  double pose_jitter = 0.002, joint_jitter = 0.002, grasp_jitter = 0.002, grasp_angle_jitter = 0.01;

  /// World-frame gripper target of a reaching action: estimated pose composed with estimated grasp.
  /// With `at`, the values come from that full assignment instead.
  std::optional<Pose2> reach_target(const FactorMeta& m, const std::vector<Value>* at = nullptr) const {
    if (!m.reach_pose || !m.reach_grasp) return std::nullopt;
    const auto& vars = net->graph.variables;
    auto est = [&](std::size_t x) -> const Value& {
      if (at) return (*at)[x];
      return vars[x].estimate ? *vars[x].estimate : vars[x].belief.best();
    };
    return compose(std::get<Pose2>(est(*m.reach_pose)), std::get<Grasp>(est(*m.reach_grasp)).offset);
  }

  double sigma(std::size_t f, std::span<const Value* const> v, const std::vector<Value>* at = nullptr) const {
    work::add();
    const FactorMeta& m = net->factors[f];
    auto radius = [&] { return world->object(m.object).radius; };
    switch (m.kind) {
      case ConstraintKind::kMotion:
        return sigma_motion(std::get<Config>(*v[0]), std::get<Config>(*v[1]), std::get<Trajectory>(*v[2]), params);
      case ConstraintKind::kKin:
        return sigma_kin(std::get<Config>(*v[0]), std::get<Pose2>(*v[1]), std::get<Grasp>(*v[2]), world->arm, params);
      case ConstraintKind::kCFree:
        return sigma_cfree(std::get<Trajectory>(*v[0]), *world, reach_target(m, at), params);
      case ConstraintKind::kCFreeH:
        return sigma_cfreeH(std::get<Trajectory>(*v[0]), std::get<Grasp>(*v[1]), radius(), *world, reach_target(m, at),
                            params);
      case ConstraintKind::kGraspH:
        return sigma_graspH(std::get<Grasp>(*v[0]), world->object(m.object), params);
      case ConstraintKind::kGrasp:
        return sigma_grasp(std::get<Config>(*v[0]), std::get<Pose2>(*v[1]), std::get<Grasp>(*v[2]),
                           std::get<Config>(*v[3]), std::get<Pose2>(*v[4]), world->arm, params);
      case ConstraintKind::kStable:
        return sigma_stable(std::get<Pose2>(*v[0]), world->region(m.region).rect, radius(), *world, params);
      case ConstraintKind::kInBasin:
        return sigma_in_region(std::get<Pose2>(*v[0]), RegionKind::kBasin, radius(), *world, params);
      case ConstraintKind::kInSaucepan:
        return sigma_in_region(std::get<Pose2>(*v[0]), RegionKind::kSaucepan, radius(), *world, params);
    }
    return 0.0;
  }

  // configuration targets are weighed by the density-weighted sum over sub-samples around the particle
  double weigh(const FactorGraph<Value>& g, std::size_t f, std::size_t pos, std::span<const Value* const> values,
               Rng& rng) const {
    const std::size_t x = g.factors[f].scope[pos];
    if (config_std <= 0.0 || subsamples == 0 || g.variables[x].anchored ||
        net->variables[x].kind != ParamKind::kConfig)
      return sigma(f, values);
    std::vector<const Value*> v(values.begin(), values.end());
    double w = 0.0;
    for (const auto& sub : draw_config_subsamples(std::get<Config>(*values[pos]), config_std, subsamples, rng)) {
      const Value candidate{sub.value};
      v[pos] = &candidate;
      w += sub.density * sigma(f, v);
    }
    return w;
  }

  Value jitter(const FactorGraph<Value>&, std::size_t, const Value& v, Rng& rng) const {
    return std::visit(
        [&](const auto& x) -> Value {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Pose2>) {
            return Pose2{x.x + gaussian(rng, pose_jitter), x.y + gaussian(rng, pose_jitter), x.theta};
          } else if constexpr (std::is_same_v<T, Config>) {
            Config q = x;
            for (std::size_t d = Config::kShoulder; d < Config::kDim; ++d) q[d] += gaussian(rng, joint_jitter);
            return q;
          } else if constexpr (std::is_same_v<T, Grasp>) {
            Grasp gr = x;
            gr.offset.x += gaussian(rng, grasp_jitter);
            gr.offset.y += gaussian(rng, grasp_jitter);
            gr.offset.theta = wrap_angle(gr.offset.theta + gaussian(rng, grasp_angle_jitter));
            return gr;
          } else {
            return x;
          }
        },
        v);
  }

  bool same(const FactorGraph<Value>&, std::size_t, const Value& a, const Value& b) const {
    if (a.index() != b.index()) return false;
    if (const auto* p = std::get_if<Pose2>(&a)) return norm(p->position() - std::get<Pose2>(b).position()) < 0.01;
    if (const auto* q = std::get_if<Config>(&a)) return max_abs_difference(*q, std::get<Config>(b)) < 0.01;
    if (const auto* g = std::get_if<Grasp>(&a)) {
      const auto e = pose_error(g->offset, std::get<Grasp>(b).offset);
      return e.position < 0.01 && e.angle < 0.05;
    }
    const auto& ta = std::get<Trajectory>(a).waypoints;
    const auto& tb = std::get<Trajectory>(b).waypoints;
    if (ta.size() != tb.size()) return false;
    for (std::size_t i = 0; i < ta.size(); ++i)
      if (max_abs_difference(ta[i], tb[i]) >= 0.01) return false;
    return true;
  }

  /// Product of all potentials at a full assignment.
  double score(const std::vector<Value>& x) const {
    double s = 1.0;
    for (std::size_t f = 0; f < net->graph.factors.size(); ++f) {
      std::vector<const Value*> v;
      for (auto id : net->graph.factors[f].scope) v.push_back(&x[id]);
      s *= sigma(f, v, &x);
    }
    return s;
  }
};

/// Assignment built from particle index i of every variable (round-robin on short sets).
inline std::vector<Value> chain(const ConstraintNetwork& net, std::size_t i) {
  std::vector<Value> out;
  for (const auto& v : net.graph.variables) out.push_back(v.belief[i % v.belief.size()].value);
  return out;
}

/// Feasibility search over the generator chains: the chain with the largest product of potentials
/// (lowest index on ties).
inline std::vector<Value> best_chain(const ConstraintNetwork& net, const KitchenModel& model) {
  std::size_t m = 0;
  for (const auto& v : net.graph.variables) m = std::max(m, v.belief.size());
  std::vector<Value> best;
  double best_score = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    auto x = chain(net, i);
    const double s = model.score(x);
    if (s > best_score) {
      best_score = s;
      best = std::move(x);
    }
  }
  return best;
}

}  // namespace shycobra
