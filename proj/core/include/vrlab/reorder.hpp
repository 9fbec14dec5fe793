#pragma once

#include <cstdint>
#include <span>

#include "vrlab/mesh.hpp"

namespace vrlab {

// Vertex scoring constants of linear-speed vertex cache optimization. The
// defaults are the values published with that method.
struct ReorderParams {
  std::uint32_t cache_size = 32;
  double decay_power = 1.5;
  double last_tri_score = 0.75;
  double valence_boost_scale = 2.0;
  double valence_boost_power = 0.5;

  void validate() const;
};

// Greedy triangle reordering for post-transform cache locality. The output
// holds the same triangles (corner order intact) and the same vertex buffer.
IndexedMesh reorder_forsyth(const IndexedMesh& mesh, const ReorderParams& params = {});

// Average cache miss ratio: misses of a serial FIFO of `fifo_size` entries per
// triangle. Returns 0 for an empty buffer.
double acmr(std::span<const VertexIndex> indices, std::uint32_t fifo_size);

}  // namespace vrlab
