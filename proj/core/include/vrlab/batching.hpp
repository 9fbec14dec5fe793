#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vrlab/mesh.hpp"

namespace vrlab {

// Parameters shared by batch formation and the strategies that consume it.
//
// `primitive_size` is 3 for triangle meshes. Streams of virtual indices (one
// key per work item) use 1; nothing in the dedup path depends on the value
// beyond batch alignment.
struct BatchConfig {
  std::uint32_t static_batch_size = 96;  // indices per static batch
  std::uint32_t max_unique = 256;        // unique-vertex threshold of a dynamic batch
  std::uint32_t max_indices = 1023;      // index cap of a dynamic batch
  std::uint32_t lanes = 32;              // warp width
  std::uint32_t block_size = 256;        // threads per block
  std::uint32_t primitive_size = 3;

  std::uint32_t max_primitives() const noexcept { return max_indices / primitive_size; }

  // Throws ConfigError on a broken invariant.
  void validate() const;
};

// Half-open, primitive-aligned range of the index buffer.
struct Batch {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Batch&, const Batch&) = default;
};

// Fixed-size batches of cfg.static_batch_size; the final one may be shorter.
std::vector<Batch> static_batches(std::size_t index_count, const BatchConfig& cfg);

// Greedy front-to-back split: a primitive joins the open batch while the batch
// stays within cfg.max_unique distinct ids and cfg.max_indices indices.
std::vector<Batch> dynamic_batches(std::span<const VertexIndex> indices,
                                   const BatchConfig& cfg);

// Batch start positions followed by the final end offset.
std::vector<std::uint64_t> batch_offsets(std::span<const Batch> batches);
std::vector<Batch> batches_from_offsets(std::span<const std::uint64_t> offsets);

}  // namespace vrlab
