#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "collision_oracle.hpp"
#include "shycobra/constraints.hpp"
#include "shycobra/samplers.hpp"

using namespace shycobra;

namespace {

constexpr double kPi = std::numbers::pi;

template <class V>
void expect_uniform(const ParticleSet<V>& s, std::size_t m) {
  ASSERT_EQ(s.size(), m);
  double total = 0.0;
  for (const auto& p : s) {
    EXPECT_NEAR(p.weight, 1.0 / static_cast<double>(m), 1e-12);
    total += p.weight;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

double sample_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x / static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - mean) * (x - mean);
  return std::sqrt(v / static_cast<double>(xs.size() - 1));
}

WorldGeometry box_world() {
  WorldGeometry w;
  w.bounds = {0, 0, 4, 3};
  return w;
}

}  // namespace

TEST(PoseSampler, ZeroNoiseGivesMean) {
  ObjectBelief b{{{"", 1.0, {1.0, 2.0, 0.3}, 0.0}}};
  Rng rng = make_stream(1);
  const auto s = pose_sampler(b, box_world(), 100, rng);
  expect_uniform(s, 100);
  for (const auto& p : s) {
    EXPECT_EQ(p.value.x, 1.0);
    EXPECT_EQ(p.value.y, 2.0);
  }
}

TEST(PoseSampler, SpreadMatchesNoise) {
  ObjectBelief b{{{"", 1.0, {2.0, 1.5, 0.0}, 0.10}}};
  Rng rng = make_stream(2);
  const auto s = pose_sampler(b, box_world(), 100, rng);
  std::vector<double> xs, ys;
  for (const auto& p : s) {
    xs.push_back(p.value.x);
    ys.push_back(p.value.y);
  }
  EXPECT_NEAR(sample_std(xs), 0.10, 0.02);
  EXPECT_NEAR(sample_std(ys), 0.10, 0.02);
}

TEST(PoseSampler, DrawerMembershipFollowsMasses) {
  WorldGeometry w = box_world();
  w.regions = {{"d1", RegionKind::kDrawer, "c", {0.1, 0.1, 0.3, 0.3}},
               {"d2", RegionKind::kDrawer, "c", {1.1, 0.1, 1.3, 0.3}},
               {"d3", RegionKind::kDrawer, "c", {2.1, 0.1, 2.3, 0.3}}};
  ObjectBelief b;
  for (const auto& r : w.regions) b.components.push_back({r.name, 1.0 / 3, {r.rect.center().x, r.rect.center().y, 0}, 0.1});
  Rng rng = make_stream(3);
  const std::size_t m = 300;
  const auto s = pose_sampler(b, w, m, rng, 0.045);
  std::array<int, 3> counts{};
  for (const auto& p : s) {
    int hit = -1;
    for (int i = 0; i < 3; ++i)
      if (w.regions[i].rect.inset(0.045).contains(p.value.position())) hit = i;
    ASSERT_GE(hit, 0) << "sample outside every drawer";
    ++counts[hit];
  }
  // binomial(300, 1/3): mean 100, sd 8.2
  for (int c : counts) EXPECT_NEAR(c, 100, 2 * 8.2);
}

TEST(GraspSampler, RimOffsetsAndRoundRobin) {
  const WorldGeometry w = box_world();
  const ObjectModel disc{"pear", 0.045, ""};
  std::vector<Pose2> poses;
  for (int i = 0; i < 100; ++i) poses.push_back({1.0 + 0.01 * i, 1.5, 0.1 * i});
  const auto ps = ParticleSet<Pose2>::uniform(poses);
  Rng rng = make_stream(4);
  const auto gs = grasp_sampler(ps, disc, w, 100, rng);
  expect_uniform(gs, 100);
  for (const auto& g : gs) {
    EXPECT_NEAR(g.value.offset_distance(), disc.radius, 1e-9);
    EXPECT_NEAR(sigma_graspH(g.value, disc), 1.0, 1e-9);
  }
}

TEST(GraspSampler, AvoidsBlockedSide) {
  WorldGeometry w = box_world();
  w.obstacles.push_back({"wall", {1.05, 0.0, 1.2, 3.0}});
  const ObjectModel disc{"pear", 0.045, ""};
  const Pose2 p{1.0, 1.5, 0.0};
  const auto ps = ParticleSet<Pose2>::uniform(std::vector<Pose2>(100, p));
  Rng rng = make_stream(5);
  const auto gs = grasp_sampler(ps, disc, w, 100, rng);
  for (const auto& g : gs) {
    const Pose2 ee = compose(p, g.value.offset);
    const double bearing = std::atan2(ee.y - p.y, ee.x - p.x);
    // oracle: sample the approach ray and test it against the wall rectangle
    const GraspSamplerOptions opt;
    bool blocked = false;
    for (int i = 0; i <= 1000; ++i) {
      const double r = (disc.radius + opt.approach_length) * i / 1000.0;
      if (testing_support::rect_distance({p.x + r * std::cos(bearing), p.y + r * std::sin(bearing)}, w.obstacles[0].rect) == 0.0)
        blocked = true;
    }
    EXPECT_FALSE(blocked) << bearing;
  }
}

TEST(GraspSampler, FacingConcentratesBearings) {
  const WorldGeometry w = box_world();
  const ObjectModel disc{"pear", 0.045, ""};
  const Pose2 p{2.0, 1.5, 0.0};
  const auto ps = ParticleSet<Pose2>::uniform(std::vector<Pose2>(200, p));
  GraspSamplerOptions opt;
  opt.facing = Vec2{2.0, 0.5};  // straight below
  Rng rng = make_stream(6);
  const auto gs = grasp_sampler(ps, disc, w, 200, rng, opt);
  std::vector<double> dev;
  for (const auto& g : gs) dev.push_back(wrap_angle(std::atan2(g.value.offset.y, g.value.offset.x) + kPi / 2));
  EXPECT_NEAR(sample_std(dev), opt.facing_spread, 0.15);
}

TEST(IkSampler, RoundTripToTargets) {
  const WorldGeometry w = box_world();
  std::vector<Pose2> poses;
  std::vector<Grasp> grasps;
  for (int i = 0; i < 50; ++i) {
    poses.push_back({2.0 + 0.01 * i, 2.0, 0.0});
    grasps.push_back(rim_grasp(0.045, -kPi / 2 + 0.02 * i));
  }
  const auto ps = ParticleSet<Pose2>::uniform(poses);
  const auto gs = ParticleSet<Grasp>::uniform(grasps);
  Rng rng = make_stream(7);
  std::vector<std::size_t> used;
  const auto qs = ik_sampler(ps, gs, {2.0, 1.3}, w, 100, rng, &used);
  expect_uniform(qs, 100);
  ASSERT_EQ(used.size(), 100u);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const Pose2 target = compose(poses[used[i]], grasps[used[i]].offset);
    const auto e = pose_error(forward_kinematics(qs[i].value, w.arm), target);
    EXPECT_LT(e.position, 1e-9);
    EXPECT_LT(e.angle, 1e-9);
  }
}

TEST(IkSampler, UnreachableThrows) {
  const WorldGeometry w = box_world();
  const auto ps = ParticleSet<Pose2>::uniform({Pose2{3.9, 2.9, 0}});
  const auto gs = ParticleSet<Grasp>::uniform({rim_grasp(0.045, 0)});
  Rng rng = make_stream(8);
  EXPECT_THROW(ik_sampler(ps, gs, {1.0, 1.0}, w, 10, rng), GeneratorError);
}

TEST(IkSampler, SubSampleSpread) {
  const Config mean = make_config({1, 1}, 0.3, 0.4, 0.5);
  Rng rng = make_stream(9);
  std::vector<double> d;
  for (int i = 0; i < 100; ++i)
    for (const auto& s : draw_config_subsamples(mean, 0.25, 10, rng))
      for (std::size_t j = Config::kShoulder; j < Config::kDim; ++j) d.push_back(s.value[j] - mean[j]);
  EXPECT_NEAR(sample_std(d), 0.25, 0.05);
  const auto one = draw_config_subsamples(mean, 0.0, 10, rng);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].value, mean);
}

TEST(TrajectorySampler, EmptyWorldIsStraight) {
  WorldGeometry w;
  w.bounds = {-10, -10, 10, 10};
  const Config a = make_config({0, 0}, 0.1, 0.5, 0), b = make_config({0, 0}, 1.0, 1.0, 0.5);
  Rng rng = make_stream(10);
  const auto ts = trajectory_sampler(ParticleSet<Config>::uniform({a}), ParticleSet<Config>::uniform({b}), w, 5, rng);
  expect_uniform(ts, 5);
  for (const auto& t : ts) {
    ASSERT_EQ(t.value.waypoints.size(), kDefaultWaypoints);
    EXPECT_NEAR(t.value.length(), distance(a, b), 1e-9);
  }
}

TEST(TrajectorySampler, StartEqualsGoalIsConstant) {
  WorldGeometry w;
  w.bounds = {-10, -10, 10, 10};
  const Config a = make_config({0, 0}, 0.1, 0.5, 0);
  Rng rng = make_stream(11);
  const auto ts = trajectory_sampler(ParticleSet<Config>::uniform({a}), ParticleSet<Config>::uniform({a}), w, 3, rng);
  for (const auto& t : ts) {
    EXPECT_EQ(t.value.length(), 0.0);
    EXPECT_EQ(t.value.front(), a);
  }
}

TEST(TrajectorySampler, WallWithGapPassesOracle) {
  WorldGeometry w;
  w.bounds = {0, 0, 4, 3};
  w.obstacles = {{"lower", {1.9, 0.0, 2.1, 1.2}}, {"upper", {1.9, 1.8, 2.1, 3.0}}};
  const Config a = w.arm.tucked_at({0.8, 1.5}), b = w.arm.tucked_at({3.2, 1.5});
  TrajectorySamplerOptions opt;
  opt.base_only = true;
  Rng rng = make_stream(12);
  const auto ts = trajectory_sampler(ParticleSet<Config>::uniform({a}), ParticleSet<Config>::uniform({b}), w, 20, rng, opt);
  expect_uniform(ts, 20);
  for (const auto& t : ts) {
    EXPECT_EQ(t.value.front(), a);
    EXPECT_EQ(t.value.back(), b);
    EXPECT_TRUE(testing_support::trajectory_free(t.value, w));
  }
}

TEST(TrajectorySampler, HeldObjectIsChecked) {
  WorldGeometry w;
  w.bounds = {0, 0, 4, 3};
  w.obstacles = {{"post", {2.4, 1.45, 2.5, 1.55}}};
  // the straight sweep carries the held disc through the post; the arm has to fold past it
  const Config a = make_config({1.5, 1.5}, -0.9, 0.3, 0.0), b = make_config({1.5, 1.5}, 0.9, -0.3, 0.0);
  const auto held = ParticleSet<Grasp>::uniform({rim_grasp(0.045, kPi)});
  Rng rng = make_stream(13);
  const auto ts = trajectory_sampler(ParticleSet<Config>::uniform({a}), ParticleSet<Config>::uniform({b}), w, 10, rng, {},
                                     &held, 0.045);
  const Trajectory straight{{a, b}};
  EXPECT_FALSE(testing_support::trajectory_free(straight, w, held[0].value, 0.045));
  for (const auto& t : ts) EXPECT_TRUE(testing_support::trajectory_free(t.value, w, held[0].value, 0.045));
}

TEST(TrajectorySampler, ImpossiblePairThrows) {
  WorldGeometry w;
  w.bounds = {0, 0, 4, 3};
  w.obstacles = {{"wall", {1.9, 0.0, 2.1, 3.0}}};
  TrajectorySamplerOptions opt;
  opt.base_only = true;
  opt.retries = 0;
  opt.rrt.max_iterations = 200;
  Rng rng = make_stream(14);
  EXPECT_THROW(trajectory_sampler(ParticleSet<Config>::uniform({w.arm.tucked_at({0.8, 1.5})}),
                                  ParticleSet<Config>::uniform({w.arm.tucked_at({3.2, 1.5})}), w, 2, rng, opt),
               GeneratorError);
}

TEST(Samplers, FixedSeedIsReproducible) {
  WorldGeometry w;
  w.bounds = {0, 0, 4, 3};
  w.obstacles = {{"lower", {1.9, 0.0, 2.1, 1.2}}, {"upper", {1.9, 1.8, 2.1, 3.0}}};
  ObjectBelief b{{{"", 1.0, {2.0, 1.5, 0.0}, 0.10}}};
  auto run = [&] {
    Rng rng = make_stream(99);
    const auto ps = pose_sampler(b, w, 20, rng);
    const auto gs = grasp_sampler(ps, {"pear", 0.045, ""}, w, 20, rng);
    TrajectorySamplerOptions opt;
    opt.base_only = true;
    const auto ts = trajectory_sampler(ParticleSet<Config>::uniform({w.arm.tucked_at({0.8, 1.5})}),
                                       ParticleSet<Config>::uniform({w.arm.tucked_at({3.2, 1.5})}), w, 4, rng, opt);
    return std::tuple{ps.values(), gs.values(), ts.values()};
  };
  EXPECT_EQ(run(), run());
}
