// Dynamically batched sorting: sort (id, slot) pairs, mark the last element of
// every run of equal ids, and an exclusive prefix sum over the marks gives each
// slot the rank of its id among the batch's unique ids.

#include <array>
#include <string>

#include "vrlab/dedup.hpp"
#include "vrlab/error.hpp"

namespace vrlab {
namespace {

// Stable LSD radix sort on 32-bit keys, 8 bits per pass, payload carried along.
void radix_sort_pairs(std::vector<VertexIndex>& keys, std::vector<std::uint32_t>& values) {
  const std::size_t n = keys.size();
  std::vector<VertexIndex> key_tmp(n);
  std::vector<std::uint32_t> value_tmp(n);
  for (unsigned shift = 0; shift < 32; shift += 8) {
    std::array<std::size_t, 257> offsets{};
    for (const VertexIndex k : keys) ++offsets[((k >> shift) & 0xFFu) + 1];
    for (std::size_t d = 1; d < offsets.size(); ++d) offsets[d] += offsets[d - 1];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t dst = offsets[(keys[i] >> shift) & 0xFFu]++;
      key_tmp[dst] = keys[i];
      value_tmp[dst] = values[i];
    }
    keys.swap(key_tmp);
    values.swap(value_tmp);
  }
}

}  // namespace

BatchDedup dedup_batch_sorting(std::span<const VertexIndex> indices, Batch batch,
                               const BatchConfig& cfg) {
  if (batch.size() > cfg.max_indices) {
    throw ConfigError("dynamic batch of " + std::to_string(batch.size()) +
                      " indices exceeds the index cap");
  }
  const std::size_t n = batch.size();
  std::vector<VertexIndex> ids(indices.begin() + batch.begin, indices.begin() + batch.end);
  std::vector<std::uint32_t> lin_ids(n);
  for (std::uint32_t i = 0; i < n; ++i) lin_ids[i] = i;

  radix_sort_pairs(ids, lin_ids);

  std::vector<std::uint32_t> marks(n);
  for (std::size_t i = 0; i < n; ++i) {
    marks[i] = (i + 1 == n || ids[i] != ids[i + 1]) ? 1u : 0u;
  }
  // Exclusive scan; afterwards marks[i] is the rank of ids[i].
  std::uint32_t num_vertices = 0;
  for (auto& m : marks) {
    const std::uint32_t mark = m;
    m = num_vertices;
    num_vertices += mark;
  }
  if (num_vertices > cfg.max_unique) {
    throw ConfigError("dynamic batch holds " + std::to_string(num_vertices) +
                      " unique ids, more than max unique " + std::to_string(cfg.max_unique));
  }

  DedupRound round;
  round.shaded_ids.resize(num_vertices);
  round.assembly_map.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    round.assembly_map[lin_ids[i]] = marks[i];
    round.shaded_ids[marks[i]] = ids[i];
  }
  round.primitives = static_cast<std::uint32_t>(n / cfg.primitive_size);

  BatchDedup out{batch, {}, {}};
  out.rounds.push_back(std::move(round));
  return out;
}

}  // namespace vrlab
