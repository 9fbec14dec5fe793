#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "vrlab/batching.hpp"
#include "vrlab/error.hpp"
#include "vrlab/mesh.hpp"

using namespace vrlab;

namespace {

void expect_partition(const std::vector<Batch>& batches, std::size_t count, std::size_t align) {
  std::size_t cursor = 0;
  for (const auto& b : batches) {
    EXPECT_EQ(b.begin, cursor);
    EXPECT_LT(b.begin, b.end);
    EXPECT_EQ(b.size() % align, 0u);
    cursor = b.end;
  }
  EXPECT_EQ(cursor, count);
}

}  // namespace

TEST(StaticBatches, Examples) {
  const BatchConfig cfg;
  EXPECT_EQ(static_batches(192, cfg), (std::vector<Batch>{{0, 96}, {96, 192}}));
  EXPECT_EQ(static_batches(99, cfg), (std::vector<Batch>{{0, 96}, {96, 99}}));
  EXPECT_TRUE(static_batches(0, cfg).empty());
  EXPECT_THROW(static_batches(100, cfg), ConfigError);
}

TEST(DynamicBatches, ClosesWhenUniqueBoundExceeded) {
  BatchConfig cfg;
  cfg.max_unique = 4;
  const std::vector<VertexIndex> idx{0, 1, 2, 0, 2, 3, 4, 5, 6};
  EXPECT_EQ(dynamic_batches(idx, cfg), (std::vector<Batch>{{0, 6}, {6, 9}}));
}

TEST(DynamicBatches, ExactFitStaysInBatch) {
  BatchConfig cfg;
  cfg.max_unique = 6;
  const std::vector<VertexIndex> idx{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(dynamic_batches(idx, cfg), (std::vector<Batch>{{0, 6}}));
}

TEST(DynamicBatches, IndexCap) {
  BatchConfig cfg;
  cfg.max_indices = 6;
  const std::vector<VertexIndex> idx{0, 1, 2, 0, 1, 2, 0, 1, 2};
  EXPECT_EQ(dynamic_batches(idx, cfg), (std::vector<Batch>{{0, 6}, {6, 9}}));
}

TEST(DynamicBatches, RandomBufferRespectsBounds) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<VertexIndex> pick(0, 5000);
  std::vector<VertexIndex> idx(30000);
  for (auto& v : idx) v = pick(rng);
  const BatchConfig cfg;
  const auto batches = dynamic_batches(idx, cfg);
  expect_partition(batches, idx.size(), 3);
  for (const auto& b : batches) {
    const std::span<const VertexIndex> s(idx.data() + b.begin, b.size());
    EXPECT_LE(oracle::unique_count(s), 256u);
    EXPECT_LE(b.size() / 3, 341u);
  }
}

// Every batch is maximal: adding its successor's first triangle breaks a bound.
TEST(DynamicBatches, GreedyMaximal) {
  std::mt19937_64 rng(12);
  BatchConfig cfg;
  cfg.max_unique = 40;
  cfg.max_indices = 90;
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_mesh(rng);
    const auto batches = dynamic_batches(m.indices, cfg);
    expect_partition(batches, m.indices.size(), 3);
    for (std::size_t i = 0; i + 1 < batches.size(); ++i) {
      const auto& b = batches[i];
      const std::span<const VertexIndex> grown(m.indices.data() + b.begin, b.size() + 3);
      EXPECT_TRUE(oracle::unique_count(grown) > cfg.max_unique || grown.size() > cfg.max_indices);
    }
  }
}

TEST(DynamicBatches, PrimitiveSizeOne) {
  BatchConfig cfg;
  cfg.primitive_size = 1;
  cfg.max_unique = 2;
  const std::vector<VertexIndex> idx{4, 4, 5, 6, 6, 4};
  EXPECT_EQ(dynamic_batches(idx, cfg), (std::vector<Batch>{{0, 3}, {3, 6}}));
}

TEST(DynamicBatches, Deterministic) {
  const auto m = shuffle_triangles(gen_icosphere(4), 5);
  EXPECT_EQ(dynamic_batches(m.indices, BatchConfig{}), dynamic_batches(m.indices, BatchConfig{}));
}

TEST(BatchConfig, Validation) {
  BatchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.static_batch_size = 95;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_unique = 2;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_indices = 1024;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.lanes = 24;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  EXPECT_EQ(cfg.max_primitives(), 341u);
}

TEST(BatchOffsets, RoundTrip) {
  const std::vector<Batch> batches{{0, 96}, {96, 192}, {192, 195}};
  const auto off = batch_offsets(batches);
  EXPECT_EQ(off, (std::vector<std::uint64_t>{0, 96, 192, 195}));
  EXPECT_EQ(batches_from_offsets(off), batches);
  EXPECT_THROW(batches_from_offsets(std::vector<std::uint64_t>{0, 6, 6}), ConfigError);
}
