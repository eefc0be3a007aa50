#include <cmath>

#include <gtest/gtest.h>

#include "securebf/oracle.hpp"

using namespace securebf;

namespace {

SystemParams small_params() {
  SystemParams p;
  p.n_s = p.n_1 = 2;
  p.n_2 = 1;
  p.n_e = 1;
  return p;
}

ChannelSet small_channels(const SystemParams& p, std::uint64_t seed) {
  return restrict_to_real(generate_channel_set(p, NetworkLayout::default_for(p.n_e), seed));
}

}  // namespace

TEST(DirectionSet, UnitNormAndDeterministic) {
  for (int dim : {1, 2, 3, 4}) {
    const auto a = direction_set(dim, 20, 5, 9);
    const auto b = direction_set(dim, 20, 5, 9);
    ASSERT_EQ(a.size(), b.size());
    ASSERT_FALSE(a.empty());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i].norm(), 1.0, 1e-12);
      EXPECT_EQ((a[i] - b[i]).norm(), 0.0);
    }
  }
  EXPECT_EQ(direction_set(1, 20, 5, 9).size(), 1u);
  EXPECT_EQ(direction_set(2, 20, 5, 9).size(), 25u);
}

TEST(DirectionSet, RandomPartDependsOnSeed) {
  const auto a = direction_set(2, 4, 3, 1), b = direction_set(2, 4, 3, 2);
  EXPECT_GT((a.back() - b.back()).norm(), 1e-6);
  EXPECT_EQ((a.front() - b.front()).norm(), 0.0);
}

TEST(GridSpec, ValidatesAndGuardsCost) {
  GridSpec g;
  g.resolution = 0;
  EXPECT_THROW(g.validate(), std::exception);
  SystemParams p;
  EXPECT_THROW(grid_search_ssr(generate_channel_set(p, NetworkLayout::default_for(p.n_e), 0), p, GridSpec{},
                               OracleMode::asbd),
               OracleCostError);
  EXPECT_GT(grid_search_cost(small_params(), GridSpec{}, OracleMode::asbd), 0.0);
}

TEST(GridSearch, FoundPointsAreFeasible) {
  const SystemParams p = small_params();
  GridSpec spec;
  spec.resolution = 4;
  spec.direction_samples = 16;
  spec.workers = 1;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto ch = small_channels(p, seed);
    const GridResult g = grid_search_ssr(ch, p, spec, OracleMode::osbd);
    if (!g.found_feasible) continue;
    EXPECT_LE(check_osbd_constraints(ch, g.best_solution, p).worst(), 1e-9);
    EXPECT_NEAR(secrecy_sum_rate(ch, g.best_solution, p).ssr, g.best_ssr, 1e-12);
  }
}

TEST(GridSearch, RefinementNeverLowersBest) {
  const SystemParams p = small_params();
  const auto ch = small_channels(p, 1);
  GridSpec coarse;
  coarse.resolution = 3;
  coarse.direction_samples = 12;
  GridSpec fine = coarse;
  fine.resolution = 6;  // superset of the coarse scalar grid
  const GridResult a = grid_search_ssr(ch, p, coarse, OracleMode::osbd);
  const GridResult b = grid_search_ssr(ch, p, fine, OracleMode::osbd);
  if (a.found_feasible) {
    ASSERT_TRUE(b.found_feasible);
    EXPECT_GE(b.best_ssr, a.best_ssr - 1e-12);
  }
}

TEST(GridSearch, WorkerCountDoesNotChangeResult) {
  const SystemParams p = small_params();
  const auto ch = small_channels(p, 2);
  GridSpec spec;
  spec.resolution = 3;
  spec.direction_samples = 12;
  spec.workers = 1;
  const GridResult a = grid_search_ssr(ch, p, spec, OracleMode::asbd);
  spec.workers = 3;
  const GridResult b = grid_search_ssr(ch, p, spec, OracleMode::asbd);
  EXPECT_EQ(a.found_feasible, b.found_feasible);
  EXPECT_EQ(a.best_ssr, b.best_ssr);
}

TEST(GridSearch, UnreachableQosFindsNothing) {
  SystemParams p = small_params();
  p.gamma = 1e12;
  GridSpec spec;
  spec.resolution = 3;
  spec.direction_samples = 8;
  EXPECT_FALSE(grid_search_ssr(small_channels(p, 0), p, spec, OracleMode::osbd).found_feasible);
}

TEST(PowerControlOracle, StepRefinementStable) {
  SystemParams p;
  p.n_s = p.n_1 = p.n_2 = 1;
  p.p_s_watts = dbm_to_watts(40.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ch = generate_channel_set(p, NetworkLayout::default_for(p.n_e), seed);
    const auto a = brute_force_power_control(ch, p, 1e-3);
    const auto b = brute_force_power_control(ch, p, 1e-4);
    EXPECT_EQ(a.found_feasible, b.found_feasible);
    if (a.found_feasible) EXPECT_NEAR(a.best_objective, b.best_objective, 1e-2);
  }
}
