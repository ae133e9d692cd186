#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "discrete_model.hpp"
#include "shycobra/pmpnbp.hpp"

using namespace shycobra;
using testing_support::DiscreteModel;
using testing_support::DiscreteProblem;

namespace {

InferenceOptions<int> exact_options(std::size_t iterations = 10) {
  InferenceOptions<int> o;
  o.iterations = iterations;
  o.pooling = Pooling::kProduct;
  o.pairwise_max = true;
  o.stop_on_convergence = false;
  return o;
}

}  // namespace

TEST(Pmpnbp, UnaryFactorWeightsAreNormalisedPotential) {
  DiscreteProblem p{{3}, {{0}}, {{0.2, 0.6, 0.2}}};
  auto g = testing_support::full_domain_graph(p);
  DiscreteModel model{&p};
  Pmpnbp<int, DiscreteModel> engine(g, model, exact_options(1));
  engine.step(1);
  const auto& msg = engine.factor_message(0, 0);
  EXPECT_NEAR(msg[0].weight, 0.2, 1e-12);
  EXPECT_NEAR(msg[1].weight, 0.6, 1e-12);
  EXPECT_NEAR(msg[2].weight, 0.2, 1e-12);
}

TEST(Pmpnbp, PairwiseMaxMatchesEnumeration) {
  // equality factor over two 3-valued variables; the neighbour's message carries known weights
  DiscreteProblem p{{3, 3}, {{1}, {0, 1}}, {{0.5, 0.3, 0.2}, {1, 0, 0, 0, 1, 0, 0, 0, 1}}};
  p.tables[1] = {1.0, 0.1, 0.1, 0.1, 1.0, 0.1, 0.1, 0.1, 1.0};
  auto g = testing_support::full_domain_graph(p);
  DiscreteModel model{&p};
  Pmpnbp<int, DiscreteModel> engine(g, model, exact_options(2));
  engine.step(1);
  engine.step(2);
  const auto& to_x1 = engine.variable_message(1, 1);  // x1 -> equality factor
  const auto& out = engine.factor_message(1, 0);      // equality factor -> x0
  std::vector<double> expect(3, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      expect[i] = std::max(expect[i], p.tables[1][i * 3 + j] * to_x1[j].weight);
  double total = expect[0] + expect[1] + expect[2];
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(out[i].weight, expect[i] / total, 1e-12);
}

TEST(Pmpnbp, AllZeroPotentialFallsBackToUniform) {
  DiscreteProblem p{{4}, {{0}}, {{0, 0, 0, 0}}};
  auto g = testing_support::full_domain_graph(p);
  DiscreteModel model{&p};
  Pmpnbp<int, DiscreteModel> engine(g, model, exact_options(1));
  engine.step(1);
  for (const auto& q : engine.factor_message(0, 0)) EXPECT_DOUBLE_EQ(q.weight, 0.25);
}

TEST(Pmpnbp, LeafVariableSendsItsBelief) {
  DiscreteProblem p{{3, 3}, {{0, 1}}, {std::vector<double>(9, 1.0)}};
  auto g = testing_support::full_domain_graph(p);
  g.variables[0].belief[2].weight = 5.0;
  g.variables[0].belief.normalize();
  const auto before = g.variables[0].belief;
  DiscreteModel model{&p};
  InferenceOptions<int> o;
  Pmpnbp<int, DiscreteModel> engine(g, model, o);
  engine.step(1);
  const auto& msg = engine.variable_message(0, 0);
  ASSERT_EQ(msg.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(msg[i].weight, before[i].weight);
}

TEST(Pmpnbp, MessageExcludesTargetFactor) {
  // x0 has a unary preference for value 2 and a second factor f1; the message to f0 must not see f0's own preference
  DiscreteProblem p{{3, 3}, {{0}, {0, 1}}, {{0.01, 0.01, 0.98}, std::vector<double>(9, 1.0)}};
  auto g = testing_support::full_domain_graph(p);
  DiscreteModel model{&p};
  Pmpnbp<int, DiscreteModel> engine(g, model, exact_options(2));
  engine.step(1);
  engine.step(2);
  const auto& to_f0 = engine.variable_message(0, 0);
  for (const auto& q : to_f0) EXPECT_NEAR(q.weight, 1.0 / 3.0, 1e-12);
  const auto& to_f1 = engine.variable_message(1, 0);
  EXPECT_NEAR(to_f1[2].weight, 0.98, 1e-12);
}

TEST(Pmpnbp, UnionResamplingFollowsMessageMass) {
  // two factor messages with disjoint supports and 3:1 total mass through a shared x
  FactorGraph<int> g;
  g.add_variable("x");
  std::vector<int> vals(100);
  for (int i = 0; i < 100; ++i) vals[i] = i;
  g.variables[0].belief = ParticleSet<int>::uniform(vals);
  g.add_factor("a", 0, {0});
  g.add_factor("b", 0, {0});
  g.add_factor("c", 0, {0});
  struct M {
    double weigh(const FactorGraph<int>& g, std::size_t f, std::size_t, std::span<const int* const> v, Rng&) const {
      if (g.factors[f].name == "a") return *v[0] < 50 ? 1.0 : 0.0;
      if (g.factors[f].name == "b") return *v[0] < 50 ? 1.0 : 0.0;
      return *v[0] >= 50 ? 1.0 : 0.0;
    }
    int jitter(const FactorGraph<int>&, std::size_t, int v, Rng&) const { return v; }
    bool same(const FactorGraph<int>&, std::size_t, int a, int b) const { return a == b; }
  } model;
  InferenceOptions<int> o;
  o.seed = 7;
  Pmpnbp<int, M> engine(g, model, o);
  engine.step(1);
  int low = 0;
  for (const auto& q : g.variables[0].belief) low += q.value < 50;
  EXPECT_NEAR(low, 67, 15);  // two of three messages put mass on the low half
  EXPECT_EQ(g.variables[0].belief.size(), 100u);
}

TEST(Pmpnbp, AnchoredBeliefNeverChanges) {
  DiscreteProblem p{{3, 3}, {{0, 1}, {0}}, {std::vector<double>(9, 0.5), {0.1, 0.1, 0.8}}};
  auto g = testing_support::full_domain_graph(p);
  g.variables[0].anchored = true;
  const auto before = g.variables[0].belief;
  DiscreteModel model{&p};
  run_inference(g, model, InferenceOptions<int>{});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(g.variables[0].belief[i].value, before[i].value);
    EXPECT_EQ(g.variables[0].belief[i].weight, before[i].weight);
  }
}

TEST(Pmpnbp, ZeroIterationsKeepsInitialBeliefs) {
  DiscreteProblem p{{3}, {{0}}, {{0.2, 0.6, 0.2}}};
  auto g = testing_support::full_domain_graph(p);
  DiscreteModel model{&p};
  auto r = run_inference(g, model, exact_options(0));
  EXPECT_EQ(r.iterations, 0u);
  for (const auto& q : g.variables[0].belief) EXPECT_DOUBLE_EQ(q.weight, 1.0 / 3.0);
}

TEST(Pmpnbp, AssignmentTieGoesToLowestIndex) {
  FactorGraph<int> g;
  g.add_variable("x");
  g.variables[0].belief = ParticleSet<int>({{10, 0.1}, {11, 0.7}, {12, 0.2}});
  EXPECT_EQ(max_product_assignment(g)[0], 11);
  g.variables[0].belief = ParticleSet<int>({{10, 0.5}, {11, 0.5}});
  EXPECT_EQ(max_product_assignment(g)[0], 10);
}

TEST(Pmpnbp, TreeAssignmentMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = testing_support::random_tree(rng);
    auto g = testing_support::full_domain_graph(p);
    DiscreteModel model{&p};
    run_inference(g, model, exact_options(10));
    EXPECT_EQ(max_product_assignment(g), testing_support::brute_force_argmax(p)) << "trial " << trial;
  }
}

TEST(Pmpnbp, ArgmaxStableAfterDiameterIterations) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing_support::random_tree(rng);
    auto g = testing_support::full_domain_graph(p);
    DiscreteModel model{&p};
    Pmpnbp<int, DiscreteModel> engine(g, model, exact_options(12));
    const std::size_t diameter = p.domain.size();  // upper bound on tree diameter (+1 for unary layer)
    std::vector<int> at_diameter;
    for (std::size_t m = 1; m <= 12; ++m) {
      engine.step(m);
      if (m == diameter + 1) at_diameter = engine.assignment();
      if (m > diameter + 1) {
        EXPECT_EQ(engine.assignment(), at_diameter);
      }
    }
  }
}

TEST(Pmpnbp, ScalingAPotentialLeavesAssignmentUnchanged) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing_support::random_tree(rng);
    auto scaled = p;
    for (auto& c : scaled.tables[trial % scaled.tables.size()]) c *= 7.5;
    auto g1 = testing_support::full_domain_graph(p);
    auto g2 = testing_support::full_domain_graph(scaled);
    DiscreteModel m1{&p}, m2{&scaled};
    run_inference(g1, m1, exact_options());
    run_inference(g2, m2, exact_options());
    EXPECT_EQ(max_product_assignment(g1), max_product_assignment(g2));
  }
}

TEST(Pmpnbp, SameSeedGivesIdenticalBeliefs) {
  std::mt19937_64 rng(9);
  auto p = testing_support::random_tree(rng);
  auto run = [&] {
    auto g = testing_support::full_domain_graph(p);
    DiscreteModel model{&p};
    InferenceOptions<int> o;
    o.seed = 42;
    o.stop_on_convergence = false;
    run_inference(g, model, o);
    return g;
  };
  auto a = run(), b = run();
  for (std::size_t x = 0; x < a.variables.size(); ++x)
    for (std::size_t i = 0; i < a.variables[x].belief.size(); ++i) {
      EXPECT_EQ(a.variables[x].belief[i].value, b.variables[x].belief[i].value);
      EXPECT_EQ(a.variables[x].belief[i].weight, b.variables[x].belief[i].weight);
    }
}

TEST(Pmpnbp, TraceSeesNormalisedSetsOfConstantSize) {
  std::mt19937_64 rng(13);
  auto p = testing_support::random_tree(rng);
  auto g = testing_support::full_domain_graph(p);
  DiscreteModel model{&p};
  InferenceOptions<int> o;
  std::size_t records = 0;
  o.trace = [&](const TraceRecord<int>& r) {
    ++records;
    double s = 0.0;
    for (const auto& q : *r.particles) s += q.weight;
    EXPECT_NEAR(s, 1.0, 1e-9);
  };
  run_inference(g, model, o);
  EXPECT_GT(records, 0u);
}
