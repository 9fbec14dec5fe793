#include "vrlab/cache_sim.hpp"

#include <list>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "vrlab/error.hpp"

namespace vrlab {
namespace {

class LruCache {
 public:
  explicit LruCache(std::uint64_t capacity) : capacity_(capacity) {}

  // Hit refreshes recency.
  bool touch(VertexIndex id) {
    const auto it = where_.find(id);
    if (it == where_.end()) return false;
    order_.splice(order_.begin(), order_, it->second);
    return true;
  }

  void insert(VertexIndex id) {
    if (touch(id)) return;
    order_.push_front(id);
    where_.emplace(id, order_.begin());
    if (order_.size() > capacity_) {
      where_.erase(order_.back());
      order_.pop_back();
    }
  }

 private:
  std::uint64_t capacity_;
  std::list<VertexIndex> order_;
  std::unordered_map<VertexIndex, std::list<VertexIndex>::iterator> where_;
};

}  // namespace

void CacheConfig::validate() const {
  if (num_processors == 0) throw ConfigError("cache model needs at least one processor");
  if (wave_width == 0) throw ConfigError("wave width must be at least 1");
  if (entries_override == 0 && entry_bytes == 0) throw ConfigError("entry size must be positive");
  if (entries() == 0) {
    throw ConfigError("cache of " + std::to_string(cache_bytes) + " bytes holds no " +
                      std::to_string(entry_bytes) + "-byte entry");
  }
}

double ideal_reuse(std::span<const VertexIndex> indices) {
  if (indices.empty()) throw ConfigError("ideal reuse of an empty index buffer");
  return 1.0 - static_cast<double>(count_unique(indices)) / static_cast<double>(indices.size());
}

std::vector<std::pair<std::size_t, std::size_t>> processor_chunks(std::size_t index_count,
                                                                  const CacheConfig& cfg,
                                                                  std::size_t primitive_size) {
  std::vector<std::pair<std::size_t, std::size_t>> chunks;
  const std::size_t procs = cfg.num_processors;
  std::size_t chunk = (index_count + procs - 1) / procs;
  chunk = (chunk + primitive_size - 1) / primitive_size * primitive_size;
  for (std::size_t p = 0; p < procs; ++p) {
    const std::size_t begin = std::min(index_count, p * chunk);
    const std::size_t end = std::min(index_count, begin + chunk);
    chunks.emplace_back(begin, end);
  }
  return chunks;
}

CacheReport simulate_processor(std::span<const VertexIndex> indices, std::uint32_t wave_width,
                               std::uint64_t entries) {
  CacheReport report;
  LruCache cache(entries);
  std::vector<VertexIndex> missed;
  std::unordered_set<VertexIndex> missed_set;
  for (std::size_t cycle = 0; cycle < indices.size(); cycle += wave_width) {
    const std::size_t end = std::min(indices.size(), cycle + wave_width);
    missed.clear();
    missed_set.clear();
    for (std::size_t i = cycle; i < end; ++i) {
      const VertexIndex id = indices[i];
      if (cache.touch(id)) {
        ++report.hits;
      } else {
        ++report.misses;
        if (missed_set.insert(id).second) missed.push_back(id);
      }
    }
    for (const VertexIndex id : missed) cache.insert(id);
  }
  return report;
}

CacheReport simulate_parallel_cache(std::span<const VertexIndex> indices, const CacheConfig& cfg,
                                    ExecutionOptions exec) {
  cfg.validate();
  if (indices.size() % 3 != 0) throw ConfigError("cache simulation needs a triangle-aligned buffer");
  const auto chunks = processor_chunks(indices.size(), cfg);
  std::vector<CacheReport> per_processor(chunks.size());
  parallel_for(chunks.size(), exec.workers, [&](std::size_t p) {
    const auto [begin, end] = chunks[p];
    per_processor[p] =
        simulate_processor(indices.subspan(begin, end - begin), cfg.wave_width, cfg.entries());
  });
  CacheReport total;
  for (const auto& r : per_processor) {
    total.hits += r.hits;
    total.misses += r.misses;
  }
  return total;
}

}  // namespace vrlab
