#include <gtest/gtest.h>

#include <sstream>

#include "shycobra/executive.hpp"

using namespace shycobra;

namespace {

const Kitchen& kitchen() {
  static const Kitchen k = Kitchen::builtin();
  return k;
}

PlannerConfig small(NoiseModel noise, std::uint64_t seed) {
  PlannerConfig c;
  c.particles = 30;
  c.iterations = 5;
  c.noise = noise;
  c.seed = seed;
  return c;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Executive, AlgorithmNames) {
  EXPECT_EQ(parse_algorithm("shycobra"), Algorithm::kShyCobra);
  EXPECT_EQ(parse_algorithm("mlo"), Algorithm::kMlo);
  EXPECT_THROW(parse_algorithm("rrt"), std::invalid_argument);
}

TEST(Executive, PearInLastDrawerCostsTwoAbsenceReplans) {
  const NoiseModel quiet{0.0, 0.0};
  const auto sc = make_world(kitchen(), Task::kRetrieve, 3, {.noise = quiet, .pear_drawer = "drawer3"});
  const auto r = run_trial(kitchen(), sc, Algorithm::kShyCobra, small(quiet, 3));
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.absence_replans, 2u);
  EXPECT_EQ(std::count(r.executed.begin(), r.executed.end(), "open(drawer1, cabinet)"), 1);
  EXPECT_EQ(std::count(r.executed.begin(), r.executed.end(), "open(drawer2, cabinet)"), 1);
  EXPECT_EQ(r.executed.back(), "pick(pear, drawer3, cabinet)");
}

TEST(Executive, NoiselessRetrieveHasNoErrors) {
  const NoiseModel quiet{0.0, 0.0};
  for (Algorithm alg : {Algorithm::kShyCobra, Algorithm::kMlo}) {
    const auto sc = make_world(kitchen(), Task::kRetrieve, 5, {.noise = quiet, .pear_drawer = "drawer1"});
    const auto r = run_trial(kitchen(), sc, alg, small(quiet, 5));
    EXPECT_TRUE(r.success) << to_string(alg);
    EXPECT_EQ(r.num_errors, 0u) << to_string(alg);
    EXPECT_EQ(r.replans, 0u) << to_string(alg);
    EXPECT_GT(r.planning_time_s, 0.0);
  }
}

TEST(Executive, TrialsAreDeterministic) {
  BenchmarkConfig bc;
  bc.trials = 2;
  bc.seed = 40;
  bc.planner = small({}, 0);
  const auto a = run_benchmark(kitchen(), bc), b = run_benchmark(kitchen(), bc);
  std::ostringstream sa, sb;
  write_csv_rows(sa, a);
  write_csv_rows(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].metrics.executed, b[i].metrics.executed);
}

TEST(Executive, ZeroTrialsGivesHeaderOnly) {
  BenchmarkConfig bc;
  bc.trials = 0;
  std::ostringstream os;
  write_csv_header(os);
  write_csv_rows(os, run_benchmark(kitchen(), bc));
  EXPECT_EQ(os.str(), "alg,task,trial,seed,planning_time_s,num_errors,replans,success\n");
}

TEST(Executive, NoiseGridMultipliesRows) {
  BenchmarkConfig bc;
  bc.alg = Algorithm::kMlo;
  bc.trials = 2;
  bc.seed = 9;
  bc.noise_grid = {{0.0, 0.0}, {0.02, 0.05}, {0.10, 0.25}};
  bc.planner = small({}, 0);
  const auto rows = run_benchmark(kitchen(), bc);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].noise.pose, bc.noise_grid[i / 2].pose);
    EXPECT_EQ(rows[i].trial, i % 2);
    EXPECT_EQ(rows[i].seed, 9 + i % 2);
  }
  std::ostringstream os;
  write_csv_header(os);
  write_csv_rows(os, rows);
  EXPECT_EQ(count_lines(os.str()), 7u);
}

TEST(Executive, SummaryMatchesHandComputation) {
  std::vector<TrialRow> rows(3);
  const double t[3] = {1.0, 2.0, 4.0};
  const std::size_t e[3] = {0, 1, 5};
  for (int i = 0; i < 3; ++i) {
    rows[i].metrics.planning_time_s = t[i];
    rows[i].metrics.num_errors = e[i];
    rows[i].metrics.success = i != 1;
  }
  const auto s = summarize(rows);
  EXPECT_DOUBLE_EQ(s.mean_time, 7.0 / 3.0);
  EXPECT_NEAR(s.std_time, std::sqrt(((1 - 7.0 / 3) * (1 - 7.0 / 3) + (2 - 7.0 / 3) * (2 - 7.0 / 3) +
                                     (4 - 7.0 / 3) * (4 - 7.0 / 3)) / 2.0), 1e-12);
  EXPECT_DOUBLE_EQ(s.mean_errors, 2.0);
  EXPECT_NEAR(s.std_errors, std::sqrt((4.0 + 1.0 + 9.0) / 2.0), 1e-12);
  EXPECT_DOUBLE_EQ(s.success_rate, 2.0 / 3.0);
  EXPECT_EQ(summarize({}).mean_time, 0.0);
}

TEST(Executive, CsvRowFormat) {
  TrialRow r{Algorithm::kMlo, Task::kWash, 3, 103, {}, {}};
  r.metrics.planning_time_s = 0.25;
  r.metrics.num_errors = 2;
  r.metrics.replans = 4;
  std::ostringstream os;
  write_csv_rows(os, {r});
  EXPECT_EQ(os.str(), "mlo,wash,3,103,0.250000,2,4,0\n");
}
