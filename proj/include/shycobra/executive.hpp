#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <ostream>
#include <string>
#include <vector>

#include "shycobra/constraint_network.hpp"
#include "shycobra/kitchen_sim.hpp"
#include "shycobra/pmpnbp.hpp"
#include "shycobra/work_clock.hpp"

namespace shycobra {

enum class Algorithm { kShyCobra, kMlo };

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "shycobra") return Algorithm::kShyCobra;
  if (s == "mlo") return Algorithm::kMlo;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

inline std::string to_string(Algorithm a) { return a == Algorithm::kShyCobra ? "shycobra" : "mlo"; }

struct PlannerConfig {
  std::size_t particles = 100;
  std::size_t iterations = 10;
  std::size_t subsamples = 10;
  NoiseModel noise;
  std::uint64_t seed = 0;
  std::size_t replan_budget = 10;
  std::function<void(const TraceRecord<Value>&)> trace;
};

struct RunMetrics {
  double planning_time_s = 0.0;  // work-clock time of network construction, initialisation and inference
  std::size_t num_errors = 0;    // failed picks/places and inapplicable actions
  std::size_t replans = 0;
  std::size_t absence_replans = 0;  // replans caused by an inspected container being empty
  bool success = false;
  std::vector<std::size_t> cycle_iterations;
  std::vector<std::string> executed;  // ground actions in execution order
};

namespace detail {

inline ActionValues action_values(const ConstraintNetwork& net, const std::vector<Value>& x, std::size_t step,
                                  const GroundAction& a) {
  ActionValues v;
  for (const auto& p : a.schema->parameters)
    if (p.kind != ParamKind::kSymbol) v.emplace(p.name, x[net.parameter(step, p.name)]);
  return v;
}

/// Where the plan expects `obj` to be when a remaining action (after `done`) next touches its
/// current pose: the pose a pick's configuration and grasp aim at, or the assigned pose.
inline std::optional<Pose2> expected_pose(const ConstraintNetwork& net, const std::vector<Value>& x,
                                          const PlanSkeleton& plan, std::size_t done, const std::string& obj,
                                          const ArmModel& arm) {
  for (std::size_t k = done + 1; k <= plan.actions.size(); ++k) {
    const auto& a = plan.actions[k - 1];
    std::optional<std::size_t> pose, config, grasp;
    for (const auto& p : a.schema->parameters) {
      if (p.kind == ParamKind::kSymbol) continue;
      const std::size_t id = net.parameter(k, p.name);
      const auto& meta = net.variables[id];
      if (p.kind == ParamKind::kPose && meta.object == obj) pose = id;
      if (p.kind == ParamKind::kConfig) config = id;
      if (p.kind == ParamKind::kGrasp && meta.object == obj) grasp = id;
    }
    if (!pose) continue;
    const auto& meta = net.variables[*pose];
    // a placement target only describes the object once that place has run
    if (meta.role == VariableRole::kTargetPose && meta.step > done) return std::nullopt;
    if (config && grasp)
      return compose(forward_kinematics(std::get<Config>(x[*config]), arm), inverse(std::get<Grasp>(x[*grasp]).offset));
    return std::get<Pose2>(x[*pose]);
  }
  return std::nullopt;
}

}  // namespace detail

/// Observe/plan/execute loop shared by both algorithms. Each cycle builds the constraint network
/// for the current skeleton and belief, grounds it (particle inference for SHY-COBRA, feasibility
/// search over generator chains at the most likely state for the baseline) and executes until an
/// observation contradicts the plan.
inline RunMetrics run_trial(const Kitchen& k, const Scenario& scenario, Algorithm alg, const PlannerConfig& cfg) {
  RunMetrics r;
  WorldState truth = scenario.truth;
  Belief belief = scenario.belief;
  Rng exec_rng = make_stream(cfg.seed, {0xE8EC});
  const SymbolicPlanner planner = k.planner();
  const double tolerance = k.world.tolerance.position;

  std::optional<PlanSkeleton> skeleton;
  try {
    skeleton = planner.plan(compile_state(k, belief), scenario.goal);
  } catch (const UnsolvableError&) {
    return r;
  }

  auto replan = [&](const GroundAction* failed) {
    if (r.replans >= cfg.replan_budget) return false;
    ++r.replans;
    try {
      skeleton = failed ? planner.update_plan_skeleton(*skeleton, *failed, compile_state(k, belief), scenario.goal)
                        : planner.plan(compile_state(k, belief), scenario.goal);
    } catch (const UnsolvableError&) {
      return false;
    }
    return true;
  };

  for (std::size_t cycle = 0;; ++cycle) {
    if (satisfies(truth.facts, scenario.goal)) {
      r.success = true;
      return r;
    }
    if (skeleton->empty()) {
      if (!replan(nullptr)) return r;
      continue;
    }
    const std::uint64_t cycle_seed = make_stream(cfg.seed, {0xC1C1E, cycle})();
    std::vector<Value> x;
    std::optional<ConstraintNetwork> net;
    const auto units_before = work::units;
    try {
      net = build_network(*skeleton, compile_state(k, belief));
      InitOptions init;
      init.particles = cfg.particles;
      init.seed = cycle_seed;
      init.determinize = alg == Algorithm::kMlo;
      initialize(*net, belief, k.world, init);
      KitchenModel model;
      model.net = &*net;
      model.world = &k.world;
      model.subsamples = cfg.subsamples;
      if (alg == Algorithm::kShyCobra) {
        model.config_std = k.world.joint_error_scale * cfg.noise.config;
        InferenceOptions<Value> opt;
        opt.iterations = cfg.iterations;
        opt.seed = cycle_seed;
        opt.trace = cfg.trace;
        const auto res = run_inference(net->graph, model, opt);
        r.cycle_iterations.push_back(res.iterations);
        x = max_product_assignment(net->graph);
      } else {
        x = best_chain(*net, model);
        r.cycle_iterations.push_back(0);
      }
    } catch (const GeneratorError&) {
      // no grounding at this belief: look again and retry
      r.planning_time_s += static_cast<double>(work::units - units_before) * work::kSecondsPerUnit;
      update_belief(k, belief, observe(k, truth, cfg.noise, exec_rng), cfg.noise);
      if (!replan(nullptr)) return r;
      continue;
    }
    r.planning_time_s += static_cast<double>(work::units - units_before) * work::kSecondsPerUnit;

    bool diverged = false;
    for (std::size_t step = 1; step <= skeleton->size() && !diverged; ++step) {
      const GroundAction& a = skeleton->actions[step - 1];
      const auto values = detail::action_values(*net, x, step, a);
      const std::set<Atom> known_before = belief.facts;
      auto res = execute_action(k, truth, a, values, cfg.noise, exec_rng);
      r.executed.push_back(a.to_string());
      Observation o = res.observation;
      const Observation seen = observe(k, truth, cfg.noise, exec_rng);
      o.poses = seen.poses;
      o.config = seen.config;
      update_belief(k, belief, o, cfg.noise);
      if (res.error) {
        ++r.num_errors;
        diverged = true;
      } else if (!o.absent.empty()) {
        ++r.absence_replans;
        diverged = true;
      } else {
        // a newly located object tells the plan where it really is; later sightings are just noise
        for (const auto& p : o.poses) {
          if (known_before.contains(make_atom("located", {p.object}))) continue;
          const auto expect = detail::expected_pose(*net, x, *skeleton, step, p.object, k.world.arm);
          if (expect && norm(expect->position() - p.pose.position()) > tolerance) diverged = true;
        }
      }
      if (diverged) {
        if (satisfies(truth.facts, scenario.goal)) {
          r.success = true;
          return r;
        }
        if (!replan(&a)) return r;
      }
    }
    if (!diverged && !satisfies(truth.facts, scenario.goal) && !replan(nullptr)) return r;
  }
}

struct TrialRow {
  Algorithm alg;
  Task task;
  std::size_t trial;
  std::uint64_t seed;
  NoiseModel noise;
  RunMetrics metrics;
};

struct BenchmarkConfig {
  Task task = Task::kRetrieve;
  Algorithm alg = Algorithm::kShyCobra;
  std::size_t trials = 12;
  std::uint64_t seed = 0;
  std::vector<NoiseModel> noise_grid{NoiseModel{}};
  PlannerConfig planner;
};

/// Trials for every noise level (grouped by level). Trial t of a level uses seed + t for both
/// the scenario and the planner, so algorithms are compared on identical problems.
inline std::vector<TrialRow> run_benchmark(const Kitchen& k, const BenchmarkConfig& bc) {
  std::vector<TrialRow> rows;
  for (const auto& noise : bc.noise_grid) {
    for (std::size_t t = 0; t < bc.trials; ++t) {
      const std::uint64_t seed = bc.seed + t;
      ScenarioOptions so;
      so.noise = noise;
      const Scenario sc = make_world(k, bc.task, seed, so);
      PlannerConfig pc = bc.planner;
      pc.noise = noise;
      pc.seed = seed;
      rows.push_back({bc.alg, bc.task, t, seed, noise, run_trial(k, sc, bc.alg, pc)});
    }
  }
  return rows;
}

inline void write_csv_header(std::ostream& os) {
  os << "alg,task,trial,seed,planning_time_s,num_errors,replans,success\n";
}

inline void write_csv_rows(std::ostream& os, const std::vector<TrialRow>& rows) {
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f", r.metrics.planning_time_s);
    os << to_string(r.alg) << ',' << to_string(r.task) << ',' << r.trial << ',' << r.seed << ',' << buf << ','
       << r.metrics.num_errors << ',' << r.metrics.replans << ',' << (r.metrics.success ? 1 : 0) << '\n';
  }
}

struct Summary {
  double mean_time = 0.0, std_time = 0.0, mean_errors = 0.0, std_errors = 0.0, success_rate = 0.0;
};

/// Mean and sample standard deviation over rows.
inline Summary summarize(const std::vector<TrialRow>& rows) {
  Summary s;
  const double n = static_cast<double>(rows.size());
  if (rows.empty()) return s;
  for (const auto& r : rows) {
    s.mean_time += r.metrics.planning_time_s / n;
    s.mean_errors += static_cast<double>(r.metrics.num_errors) / n;
    s.success_rate += (r.metrics.success ? 1.0 : 0.0) / n;
  }
  if (rows.size() > 1) {
    for (const auto& r : rows) {
      s.std_time += std::pow(r.metrics.planning_time_s - s.mean_time, 2);
      s.std_errors += std::pow(static_cast<double>(r.metrics.num_errors) - s.mean_errors, 2);
    }
    s.std_time = std::sqrt(s.std_time / (n - 1.0));
    s.std_errors = std::sqrt(s.std_errors / (n - 1.0));
  }
  return s;
}

}  // namespace shycobra
