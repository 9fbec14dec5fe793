#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "vrlab/error.hpp"
#include "vrlab/random_walk.hpp"

using namespace vrlab;
using namespace vrlab::walk;

namespace {

WalkConfig small_config() {
  WalkConfig cfg;
  cfg.grid_width = 64;
  cfg.grid_height = 64;
  cfg.agents = 1000;
  cfg.steps = 10;
  cfg.rng_seed = 42;
  return cfg;
}

const std::vector<Strategy> kStrategies = {Strategy::naive, Strategy::warp_voting,
                                           Strategy::sorting, Strategy::hashing,
                                           Strategy::parallel_hashing};

}  // namespace

TEST(PackedCell, RoundTrip) {
  std::mt19937_64 rng(81);
  for (int i = 0; i < 1000; ++i) {
    const auto x = static_cast<std::uint32_t>(rng() & 0xFFFF);
    const auto y = static_cast<std::uint32_t>(rng() & 0xFFFF);
    const PackedCell c(x, y);
    EXPECT_EQ(c.x(), x);
    EXPECT_EQ(c.y(), y);
    EXPECT_EQ(PackedCell::from_word(c.word()), c);
  }
  EXPECT_EQ(PackedCell(3, 2).word(), (2u << 16) | 3u);
  EXPECT_THROW(PackedCell(70000, 0), ConfigError);
}

TEST(WalkConfig, Validation) {
  WalkConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.grid_width = 65537;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.grid_width = cfg.grid_height = 65536;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.kept_moves = static_cast<std::uint32_t>(candidate_offsets(16).size()) + 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_move_distance = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Offsets, EuclideanDiscRowMajor) {
  const auto o = candidate_offsets(1);
  EXPECT_EQ(o, (std::vector<Offset>{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}));
  for (const auto& off : candidate_offsets(16)) {
    const int d2 = off.dx * off.dx + off.dy * off.dy;
    EXPECT_GE(d2, 1);
    EXPECT_LE(d2, 256);
  }
}

TEST(Likelihoods, UniformFieldKeepsScanOrder) {
  WalkConfig cfg = small_config();
  cfg.gaussians.clear();
  const auto moves = cell_likelihoods(PackedCell(32, 32), cfg);
  const auto all = candidate_offsets(cfg.max_move_distance);
  ASSERT_EQ(moves.moves.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(moves.moves[i].offset, all[i]);
    EXPECT_DOUBLE_EQ(moves.moves[i].likelihood, moves.moves[0].likelihood);
  }
  EXPECT_NEAR(moves.moves[0].likelihood, 1.0 / all.size(), 1e-15);
}

TEST(Likelihoods, SharpGaussianAttracts) {
  WalkConfig cfg = small_config();
  cfg.gaussians = {{0.75, 0.5, 0.02, 50.0}};
  const auto moves = cell_likelihoods(PackedCell(40, 32), cfg);
  EXPECT_GT(moves.moves[0].offset.dx, 0);
  EXPECT_EQ(moves.moves[0].offset.dy, 0);
}

TEST(Likelihoods, MatchBruteForce) {
  const WalkConfig cfg = small_config();
  const ActivityField field(cfg);
  std::mt19937_64 rng(82);
  for (int i = 0; i < 200; ++i) {
    const int x = static_cast<int>(rng() % cfg.grid_width);
    const int y = static_cast<int>(rng() % cfg.grid_height);
    const auto got = cell_likelihoods(PackedCell(x, y), field);
    const auto ref = oracle::likelihoods(cfg, x, y);
    ASSERT_EQ(got.moves.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) {
      EXPECT_EQ(got.moves[k].offset.dx, ref[k].dx) << x << "," << y << " k=" << k;
      EXPECT_EQ(got.moves[k].offset.dy, ref[k].dy);
      EXPECT_NEAR(got.moves[k].likelihood, ref[k].likelihood, 1e-12);
    }
  }
}

TEST(Likelihoods, CornerCellUsesInGridCandidates) {
  const WalkConfig cfg = small_config();
  const auto moves = cell_likelihoods(PackedCell(0, 0), cfg);
  for (const auto& m : moves.moves) {
    EXPECT_GE(m.offset.dx, 0);
    EXPECT_GE(m.offset.dy, 0);
  }
  EXPECT_THROW(cell_likelihoods(PackedCell(64, 0), cfg), ConfigError);
}

TEST(Rng, CounterBased) {
  EXPECT_EQ(agent_uniform(1, 2, 3), agent_uniform(1, 2, 3));
  EXPECT_NE(agent_uniform(1, 2, 3), agent_uniform(1, 2, 4));
  EXPECT_NE(agent_uniform(1, 2, 3), agent_uniform(1, 3, 3));
  double sum = 0;
  for (int a = 0; a < 10000; ++a) {
    const double u = agent_uniform(9, 0, a);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(SampleMove, ProportionalToKeptLikelihood) {
  MoveList list{{{{1, 0}, 0.75}, {{0, 1}, 0.25}}};
  EXPECT_EQ(sample_move(PackedCell(5, 5), list, 0.0), PackedCell(6, 5));
  EXPECT_EQ(sample_move(PackedCell(5, 5), list, 0.74), PackedCell(6, 5));
  EXPECT_EQ(sample_move(PackedCell(5, 5), list, 0.76), PackedCell(5, 6));
  EXPECT_EQ(sample_move(PackedCell(5, 5), MoveList{}, 0.3), PackedCell(5, 5));
}

TEST(Step, AllAgentsOnOneCell) {
  const WalkConfig cfg = small_config();
  const ActivityField field(cfg);
  const std::vector<PackedCell> agents(1000, PackedCell(10, 10));
  for (const auto s : {Strategy::sorting, Strategy::hashing, Strategy::parallel_hashing,
                       Strategy::warp_voting}) {
    const auto r = step_with_reuse(agents, field, 0, s);
    EXPECT_EQ(r.report.invocations, r.report.batches) << to_string(s);
  }
}

TEST(Step, DistinctCellsGiveNoReuse) {
  const WalkConfig cfg = small_config();
  const ActivityField field(cfg);
  std::vector<PackedCell> agents;
  for (std::uint32_t i = 0; i < 1000; ++i) agents.emplace_back(i % 64, i / 64);
  for (const auto s : kStrategies) {
    EXPECT_EQ(step_with_reuse(agents, field, 0, s).report.invocations, 1000u) << to_string(s);
  }
}

TEST(Step, MatchesPerAgentEvaluation) {
  const WalkConfig cfg = small_config();
  const ActivityField field(cfg);
  const auto agents = place_agents(cfg, Placement::quadrant);
  const auto ref = step_per_agent(agents, field, 3);
  for (const auto s : kStrategies) {
    EXPECT_EQ(step_with_reuse(agents, field, 3, s).positions, ref) << to_string(s);
  }
}

TEST(Step, InvocationsEqualPerBatchUniqueCells) {
  const WalkConfig cfg = small_config();
  const ActivityField field(cfg);
  const auto agents = place_agents(cfg, Placement::quadrant);
  std::vector<VertexIndex> ids;
  for (const auto& a : agents) ids.push_back(a.word());
  const BatchConfig batch = walk_batch_config();
  std::uint64_t expect = 0;
  for (const auto& b : dynamic_batches(ids, batch)) {
    expect += oracle::unique_count(std::span(ids).subspan(b.begin, b.size()));
  }
  EXPECT_EQ(step_with_reuse(agents, field, 0, Strategy::sorting).report.invocations, expect);
}

TEST(Step, RejectsTrianglePrimitiveSize) {
  const WalkConfig cfg = small_config();
  const ActivityField field(cfg);
  const auto agents = place_agents(cfg, Placement::uniform);
  EXPECT_THROW(step_with_reuse(agents, field, 0, Strategy::sorting, BatchConfig{}), ConfigError);
}

TEST(Walk, TrajectoriesIndependentOfStrategyAndWorkers) {
  const WalkConfig cfg = small_config();
  const auto initial = place_agents(cfg, Placement::uniform);
  const auto ref = run_walk(cfg, initial, std::nullopt);
  ASSERT_EQ(ref.trajectory.size(), 11u);
  EXPECT_TRUE(ref.step_reports.empty());
  for (const auto s : kStrategies) {
    for (unsigned w : {1u, 4u}) {
      const auto got = run_walk(cfg, initial, s, walk_batch_config(), {}, ExecutionOptions{w});
      EXPECT_EQ(got.trajectory, ref.trajectory) << to_string(s) << " workers " << w;
      EXPECT_EQ(got.step_reports.size(), 10u);
    }
  }
}

TEST(Walk, ConcentrationRaisesReuse) {
  WalkConfig cfg = small_config();
  cfg.steps = 1;
  const ActivityField field(cfg);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    cfg.rng_seed = seed;
    const auto spread = step_with_reuse(place_agents(cfg, Placement::uniform), field, 0,
                                        Strategy::sorting);
    const auto packed = step_with_reuse(place_agents(cfg, Placement::quadrant), field, 0,
                                        Strategy::sorting);
    EXPECT_GT(packed.report.reuse_rate, spread.report.reuse_rate) << seed;
  }
}

TEST(Placement, QuadrantStaysInLowerLeft) {
  const WalkConfig cfg = small_config();
  for (const auto& a : place_agents(cfg, Placement::quadrant)) {
    EXPECT_LT(a.x(), 32u);
    EXPECT_LT(a.y(), 32u);
  }
  EXPECT_EQ(place_agents(cfg, Placement::uniform), place_agents(cfg, Placement::uniform));
}
