#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "shycobra/constraint_network.hpp"
#include "shycobra/kitchen_sim.hpp"

using namespace shycobra;

namespace {

const Kitchen& kitchen() {
  static const Kitchen k = Kitchen::builtin();
  return k;
}

GroundAction act(const std::string& schema, std::map<std::string, std::string> objects) {
  for (const auto& s : kitchen().schemas)
    if (s.name == schema) return ground(std::make_shared<const ActionSchema>(s), objects);
  throw std::out_of_range(schema);
}

PlanSkeleton pick_place() {
  PlanSkeleton p;
  p.actions = {act("pick", {{"obj", "pear"}, {"r", "drawer1"}, {"loc", "cabinet"}}),
               act("place", {{"obj", "pear"}, {"r", "basin"}, {"loc", "sink"}})};
  return p;
}

// belief with the pear found in drawer1 and the robot parked at the cabinet
Belief located_pear(SymbolicState& state) {
  auto sc = make_world(kitchen(), Task::kWash, 1, {.noise = {0.0, 0.0}, .pear_drawer = "drawer1"});
  Belief b = sc.belief;
  const Pose2 truth = sc.truth.poses.at("pear");
  b.objects["pear"].components = {{"drawer1", 1.0, truth, 0.0}};
  b.facts.insert("(located pear)");
  b.facts.insert("(in pear drawer1)");
  b.facts.insert("(opened drawer1)");
  b.facts.erase("(closed drawer1)");
  b.facts.erase("(robot-at dining)");
  b.facts.insert("(robot-at cabinet)");
  b.config = kitchen().world.arm.tucked_at(kitchen().world.station("cabinet"));
  state = compile_state(kitchen(), b);
  return b;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ConstraintNetwork, PickPlaceMatchesGolden) {
  SymbolicState s;
  located_pear(s);
  const auto net = build_network(pick_place(), s);
  const std::string golden = read_file(std::string(SHYCOBRA_GOLDEN_DIR) + "/pick_place.txt");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(net.dump(), golden);
}

TEST(ConstraintNetwork, EdgesAreSymmetric) {
  const Kitchen& k = kitchen();
  for (Task t : {Task::kRetrieve, Task::kWash, Task::kServeMeal}) {
    const auto sc = make_world(k, t, 2);
    const auto init = compile_state(k, sc.belief);
    const auto net = build_network(k.planner().plan(init, sc.goal), init);
    const auto& g = net.graph;
    for (std::size_t f = 0; f < g.factors.size(); ++f)
      for (auto x : g.factors[f].scope) {
        ASSERT_LT(x, g.variables.size());
        EXPECT_EQ(std::count(g.variables[x].factors.begin(), g.variables[x].factors.end(), f), 1);
      }
    for (std::size_t x = 0; x < g.variables.size(); ++x)
      for (auto f : g.variables[x].factors) {
        const auto& sc2 = g.factors[f].scope;
        EXPECT_NE(std::find(sc2.begin(), sc2.end(), x), sc2.end());
      }
    EXPECT_EQ(net.variables.size(), g.variables.size());
    EXPECT_EQ(net.factors.size(), g.factors.size());
  }
}

TEST(ConstraintNetwork, SingleWashHasOnePose) {
  SymbolicState s = kitchen().static_facts;
  s.insert("(in pear basin)");
  s.insert("(located pear)");
  s.insert("(robot-at sink)");
  s.insert("(water-on tap)");
  PlanSkeleton p;
  p.actions = {act("wash", {{"obj", "pear"}, {"r", "basin"}})};
  const auto net = build_network(p, s);
  std::vector<std::string> poses;
  for (std::size_t i = 0; i < net.variables.size(); ++i)
    if (net.variables[i].kind == ParamKind::kPose) poses.push_back(net.graph.variables[i].name);
  ASSERT_EQ(poses.size(), 1u);
  const auto pose = net.variable(poses[0]);
  std::multiset<ConstraintKind> kinds;
  for (auto f : net.graph.variables[pose].factors) kinds.insert(net.factors[f].kind);
  EXPECT_EQ(kinds, (std::multiset<ConstraintKind>{ConstraintKind::kStable, ConstraintKind::kInBasin}));
}

TEST(ConstraintNetwork, PickKinScope) {
  SymbolicState s;
  located_pear(s);
  const auto net = build_network(pick_place(), s);
  const auto& f = net.graph.factors;
  auto kin = std::find_if(f.begin(), f.end(), [](const auto& x) { return x.name == "Kin@1"; });
  ASSERT_NE(kin, f.end());
  EXPECT_EQ(kin->scope, (std::vector<std::size_t>{net.variable("phi1"), net.variable("o0"), net.variable("g1")}));
  EXPECT_EQ(net.parameter(1, "p"), net.variable("o0"));
  EXPECT_EQ(net.parameter(2, "g"), net.variable("g1"));
  EXPECT_EQ(net.variables[net.variable("tau12")].held_grasp, net.variable("g1"));
  EXPECT_TRUE(net.graph.variables[net.variable("phi0")].anchored);
  EXPECT_TRUE(net.graph.variables[net.variable("o0")].anchored);
  EXPECT_FALSE(net.graph.variables[net.variable("o2")].anchored);
}

TEST(ConstraintNetwork, HeldObjectGetsAnchoredGrasp) {
  SymbolicState s = kitchen().static_facts;
  s.insert("(holding pear)");
  s.insert("(robot-at sink)");
  PlanSkeleton p;
  p.actions = {act("place", {{"obj", "pear"}, {"r", "basin"}, {"loc", "sink"}})};
  const auto net = build_network(p, s);
  const auto g0 = net.variable("g0");
  EXPECT_TRUE(net.graph.variables[g0].anchored);
  EXPECT_EQ(net.variables[g0].role, VariableRole::kHeldGrasp);
  EXPECT_EQ(net.parameter(1, "g"), g0);
}

TEST(ConstraintNetwork, Errors) {
  EXPECT_THROW(build_network(PlanSkeleton{}, kitchen().static_facts), std::invalid_argument);
  EXPECT_THROW(constraint_kind("Reach"), std::invalid_argument);
  // held grasp with no grasp in the belief
  SymbolicState s = kitchen().static_facts;
  s.insert("(holding pear)");
  s.insert("(robot-at sink)");
  PlanSkeleton p;
  p.actions = {act("place", {{"obj", "pear"}, {"r", "basin"}, {"loc", "sink"}})};
  auto net = build_network(p, s);
  Belief b;
  b.config = kitchen().world.arm.tucked_at(kitchen().world.station("sink"));
  EXPECT_THROW(initialize(net, b, kitchen().world, {.particles = 5}), GeneratorError);
  EXPECT_THROW(net.variable("nope"), std::out_of_range);
}

TEST(ConstraintNetwork, InitializationIsDeterministicAndConsistent) {
  SymbolicState s;
  const Belief b = located_pear(s);
  const WorldGeometry& w = kitchen().world;
  auto make = [&] {
    auto net = build_network(pick_place(), s);
    initialize(net, b, w, {.particles = 20, .seed = 5});
    return net;
  };
  const auto a = make(), c = make();
  for (std::size_t i = 0; i < a.graph.variables.size(); ++i) {
    ASSERT_EQ(a.graph.variables[i].belief.size(), 20u) << a.graph.variables[i].name;
    EXPECT_EQ(a.graph.variables[i].belief.values(), c.graph.variables[i].belief.values());
  }
  // reach configurations stand at their station; placement poses lie in the basin
  for (const auto& p : a.graph.variables[a.variable("phi1")].belief) {
    const Vec2 base = std::get<Config>(p.value).base();
    EXPECT_EQ(base, w.station("cabinet"));
  }
  const Rect basin = w.region("basin").rect;
  for (const auto& p : a.graph.variables[a.variable("o2")].belief)
    EXPECT_TRUE(basin.contains(std::get<Pose2>(p.value).position()));
  for (const auto& p : a.graph.variables[a.variable("tau01")].belief) {
    const auto& t = std::get<Trajectory>(p.value);
    EXPECT_FALSE(t.empty());
  }
}
