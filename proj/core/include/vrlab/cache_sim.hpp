#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vrlab/mesh.hpp"
#include "vrlab/parallel.hpp"

namespace vrlab {

// Per-multiprocessor post-transform cache model. Defaults describe a GPU with
// 28 multiprocessors, each shading 1024 vertices per cycle into a private LRU.
struct CacheConfig {
  std::uint32_t num_processors = 28;
  std::uint32_t wave_width = 1024;
  std::uint64_t cache_bytes = 16384;
  std::uint32_t entry_bytes = 64;
  std::uint64_t entries_override = 0;  // nonzero replaces cache_bytes / entry_bytes

  std::uint64_t entries() const noexcept {
    return entries_override != 0 ? entries_override : cache_bytes / entry_bytes;
  }
  void validate() const;
};

struct CacheReport {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;

  std::uint64_t total() const noexcept { return hits + misses; }
  double hit_rate() const noexcept {
    return total() == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total());
  }
  friend bool operator==(const CacheReport&, const CacheReport&) = default;
};

// 1 - |unique(indices)| / |indices|. Throws ConfigError on an empty buffer.
double ideal_reuse(std::span<const VertexIndex> indices);

// Contiguous, primitive-aligned chunk of the buffer owned by each processor.
std::vector<std::pair<std::size_t, std::size_t>> processor_chunks(std::size_t index_count,
                                                                  const CacheConfig& cfg,
                                                                  std::size_t primitive_size = 3);

// Within a cycle every index probes the LRU; only ids shaded in an earlier
// cycle can hit. Misses of a cycle are inserted once the cycle completes, one
// entry per distinct id, in first-miss order.
CacheReport simulate_processor(std::span<const VertexIndex> indices, std::uint32_t wave_width,
                               std::uint64_t entries);

CacheReport simulate_parallel_cache(std::span<const VertexIndex> indices, const CacheConfig& cfg,
                                    ExecutionOptions exec = {});

}  // namespace vrlab
