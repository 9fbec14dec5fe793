#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vrlab/cache_sim.hpp"
#include "vrlab/dedup.hpp"
#include "vrlab/mesh.hpp"

namespace vrlab {

// Reuse achieved by one strategy on one scene. Rates are normalized by index
// count, so cache hit rates and batch reuse share a scale.
struct ReuseReport {
  std::string scene;
  std::string strategy;
  std::uint64_t indices = 0;
  std::uint64_t invocations = 0;
  std::uint64_t unique_vertices = 0;
  std::uint64_t batches = 0;
  double reuse_rate = 0.0;  // 1 - invocations / indices
  // Per-vertex shader calls; empty when the ids are virtual (not mesh vertices)
  // or the source does not attribute calls to vertices (cache model).
  VertexShadingCounts per_vertex;
  std::optional<ProbeStats> probe_stats;

  friend bool operator==(const ReuseReport&, const ReuseReport&) = default;
};

// `vertex_count` sizes the per-vertex histogram; pass 0 to skip it.
// Throws InvariantError if the dedup result does not account for the buffer.
ReuseReport build_report(std::string scene, const DedupResult& result,
                         std::span<const VertexIndex> indices, std::size_t vertex_count);

// Every referenced vertex shaded exactly once.
ReuseReport ideal_report(std::string scene, std::span<const VertexIndex> indices,
                         std::size_t vertex_count);

// Misses play the role of invocations; `label` names the column, e.g. "cache_16KB".
ReuseReport cache_report(std::string scene, std::string label, const CacheReport& cache,
                         std::span<const VertexIndex> indices);

std::string cache_label(const CacheConfig& cfg);

struct CostEstimate {
  std::uint64_t shader_cycles_per_invocation = 0;
  std::uint64_t total_shader_cycles = 0;
};

// invocations x cycles; throws ConfigError on 64-bit overflow.
CostEstimate estimate_cost(const ReuseReport& report, std::uint64_t cycles_per_invocation);

// Scene-by-strategy grid of reuse rates. Columns follow the canonical order:
// ideal, cache columns by size, naive, warp, sort, hash, phash, then the rest.
struct ComparisonTable {
  std::vector<std::string> scenes;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> cells;  // [scene][column]

  std::string to_csv() const;
  std::string to_json() const;
};

ComparisonTable compare_table(std::span<const ReuseReport> reports);

// One row per report.
std::string reports_to_csv(std::span<const ReuseReport> reports);
std::string reports_to_json(std::span<const ReuseReport> reports);

// RFC 4180 field quoting.
std::string csv_field(std::string_view text);

}  // namespace vrlab
