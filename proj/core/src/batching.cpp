#include "vrlab/batching.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "vrlab/error.hpp"
#include "vrlab/warp.hpp"

namespace vrlab {

void BatchConfig::validate() const {
  if (primitive_size == 0) throw ConfigError("primitive size must be positive");
  if (static_batch_size < primitive_size || static_batch_size % primitive_size != 0) {
    throw ConfigError("static batch size " + std::to_string(static_batch_size) +
                      " must be a positive multiple of the primitive size");
  }
  if (max_unique < primitive_size) {
    throw ConfigError("max unique " + std::to_string(max_unique) +
                      " cannot hold a single primitive");
  }
  if (max_indices < primitive_size || max_indices % primitive_size != 0) {
    throw ConfigError("max indices " + std::to_string(max_indices) +
                      " must be a positive multiple of the primitive size");
  }
  if (block_size == 0) throw ConfigError("block size must be positive");
  simd::check_width(lanes);
  if (lanes < primitive_size) {
    throw ConfigError("warp narrower than one primitive");
  }
}

std::vector<Batch> static_batches(std::size_t index_count, const BatchConfig& cfg) {
  cfg.validate();
  if (index_count % cfg.primitive_size != 0) {
    throw ConfigError("index count " + std::to_string(index_count) +
                      " is not aligned to the primitive size");
  }
  std::vector<Batch> out;
  out.reserve(index_count / cfg.static_batch_size + 1);
  for (std::size_t begin = 0; begin < index_count; begin += cfg.static_batch_size) {
    out.push_back({begin, std::min<std::size_t>(begin + cfg.static_batch_size, index_count)});
  }
  return out;
}

std::vector<Batch> dynamic_batches(std::span<const VertexIndex> indices,
                                   const BatchConfig& cfg) {
  cfg.validate();
  const std::size_t p = cfg.primitive_size;
  if (indices.size() % p != 0) {
    throw ConfigError("index count " + std::to_string(indices.size()) +
                      " is not aligned to the primitive size");
  }
  std::vector<Batch> out;
  if (indices.empty()) return out;

  const std::size_t cap = std::size_t{cfg.max_primitives()} * p;
  std::unordered_set<VertexIndex> open;
  open.reserve(cfg.max_unique * 2);
  std::vector<VertexIndex> fresh;
  fresh.reserve(p);
  std::size_t begin = 0;

  for (std::size_t prim = 0; prim < indices.size(); prim += p) {
    fresh.clear();
    for (std::size_t k = 0; k < p; ++k) {
      const VertexIndex id = indices[prim + k];
      if (!open.contains(id) && std::find(fresh.begin(), fresh.end(), id) == fresh.end()) {
        fresh.push_back(id);
      }
    }
    const bool fits_unique = open.size() + fresh.size() <= cfg.max_unique;
    const bool fits_cap = (prim - begin) + p <= cap;
    if (prim != begin && !(fits_unique && fits_cap)) {
      out.push_back({begin, prim});
      begin = prim;
      open.clear();
      fresh.clear();
      for (std::size_t k = 0; k < p; ++k) {
        const VertexIndex id = indices[prim + k];
        if (std::find(fresh.begin(), fresh.end(), id) == fresh.end()) fresh.push_back(id);
      }
    }
    open.insert(fresh.begin(), fresh.end());
  }
  out.push_back({begin, indices.size()});
  return out;
}

std::vector<std::uint64_t> batch_offsets(std::span<const Batch> batches) {
  std::vector<std::uint64_t> offsets;
  offsets.reserve(batches.size() + 1);
  for (const auto& b : batches) offsets.push_back(b.begin);
  offsets.push_back(batches.empty() ? 0 : batches.back().end);
  return offsets;
}

std::vector<Batch> batches_from_offsets(std::span<const std::uint64_t> offsets) {
  std::vector<Batch> out;
  if (offsets.size() < 2) return out;
  out.reserve(offsets.size() - 1);
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    if (offsets[i] >= offsets[i + 1]) throw ConfigError("batch offsets must increase");
    out.push_back({static_cast<std::size_t>(offsets[i]),
                   static_cast<std::size_t>(offsets[i + 1])});
  }
  return out;
}

}  // namespace vrlab
