#include "vrlab/dedup.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <unordered_set>

#include "vrlab/error.hpp"

namespace vrlab {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::naive: return "naive";
    case Strategy::warp_voting: return "warp";
    case Strategy::sorting: return "sort";
    case Strategy::hashing: return "hash";
    case Strategy::parallel_hashing: return "phash";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept {
  for (const auto s : {Strategy::naive, Strategy::warp_voting, Strategy::sorting,
                       Strategy::hashing, Strategy::parallel_hashing}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void HashConfig::validate(const BatchConfig& cfg) const {
  if (!std::has_single_bit(table_size)) {
    throw ConfigError("hash table size must be a power of two, got " +
                      std::to_string(table_size));
  }
  if (table_size < cfg.max_unique) {
    throw ConfigError("hash table size " + std::to_string(table_size) +
                      " is smaller than max unique " + std::to_string(cfg.max_unique));
  }
  if ((multiplier & 1u) == 0) throw ConfigError("hash multiplier must be odd");
  if (max_fast_probes == 0) throw ConfigError("fast probe budget must be at least 1");
}

std::uint32_t HashConfig::slot_of(VertexIndex id) const noexcept {
  const unsigned bits = static_cast<unsigned>(std::countr_zero(table_size));
  if (bits == 0) return 0;
  return static_cast<std::uint32_t>(id * multiplier) >> (32u - bits);
}

ProbeStats& ProbeStats::operator+=(const ProbeStats& other) noexcept {
  insertions += other.insertions;
  total_probes += other.total_probes;
  max_chain = std::max(max_chain, other.max_chain);
  fast_probes += other.fast_probes;
  slow_steps += other.slow_steps;
  slow_insertions += other.slow_insertions;
  return *this;
}

std::uint64_t BatchDedup::invocations() const noexcept {
  std::uint64_t n = 0;
  for (const auto& r : rounds) n += r.shaded_ids.size();
  return n;
}

std::uint64_t BatchDedup::indices_consumed() const noexcept {
  std::uint64_t n = 0;
  for (const auto& r : rounds) n += r.assembly_map.size();
  return n;
}

std::uint64_t DedupResult::invocations() const noexcept {
  std::uint64_t n = 0;
  for (const auto& b : batches) n += b.invocations();
  return n;
}

std::uint64_t DedupResult::indices_consumed() const noexcept {
  std::uint64_t n = 0;
  for (const auto& b : batches) n += b.indices_consumed();
  return n;
}

std::uint64_t DedupResult::primitives() const noexcept {
  std::uint64_t n = 0;
  for (const auto& b : batches) {
    for (const auto& r : b.rounds) n += r.primitives;
  }
  return n;
}

ProbeStats DedupResult::probes() const noexcept {
  ProbeStats total;
  for (const auto& b : batches) total += b.probes;
  return total;
}

BatchDedup dedup_batch_naive(std::span<const VertexIndex> indices, Batch batch,
                             const BatchConfig& cfg) {
  BatchDedup out{batch, {}, {}};
  if (batch.size() == 0) return out;
  DedupRound round;
  round.shaded_ids.assign(indices.begin() + batch.begin, indices.begin() + batch.end);
  round.assembly_map.resize(batch.size());
  for (std::uint32_t k = 0; k < batch.size(); ++k) round.assembly_map[k] = k;
  round.primitives = static_cast<std::uint32_t>(batch.size() / cfg.primitive_size);
  out.rounds.push_back(std::move(round));
  return out;
}

std::vector<Batch> make_batches(Strategy strategy, std::span<const VertexIndex> indices,
                                const BatchConfig& cfg) {
  return is_dynamic(strategy) ? dynamic_batches(indices, cfg)
                              : static_batches(indices.size(), cfg);
}

DedupResult deduplicate(Strategy strategy, std::span<const VertexIndex> indices,
                        std::span<const Batch> batches, const BatchConfig& cfg,
                        const HashConfig& hash, ExecutionOptions exec) {
  cfg.validate();
  if (strategy == Strategy::hashing || strategy == Strategy::parallel_hashing) {
    hash.validate(cfg);
  }
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const Batch& batch = batches[b];
    if (batch.begin >= batch.end || batch.end > indices.size() ||
        batch.size() % cfg.primitive_size != 0 || (b > 0 && batches[b - 1].end > batch.begin)) {
      throw ConfigError("batch " + std::to_string(b) + " is empty, misaligned or out of range");
    }
  }

  DedupResult result{strategy, cfg.primitive_size, {}};
  result.batches.resize(batches.size());
  parallel_for(batches.size(), exec.workers, [&](std::size_t b) {
    switch (strategy) {
      case Strategy::naive:
        result.batches[b] = dedup_batch_naive(indices, batches[b], cfg);
        break;
      case Strategy::warp_voting:
        result.batches[b] = dedup_batch_warp_voting(indices, batches[b], cfg);
        break;
      case Strategy::sorting:
        result.batches[b] = dedup_batch_sorting(indices, batches[b], cfg);
        break;
      case Strategy::hashing:
        result.batches[b] = dedup_batch_hashing(indices, batches[b], cfg, hash);
        break;
      case Strategy::parallel_hashing:
        result.batches[b] = dedup_batch_parallel_hashing(indices, batches[b], cfg, hash);
        break;
    }
  });
  return result;
}

void check_dedup(const DedupResult& result, std::span<const VertexIndex> indices) {
  std::unordered_set<VertexIndex> seen;
  for (const auto& b : result.batches) {
    std::size_t slot = b.batch.begin;
    for (const auto& round : b.rounds) {
      if (round.assembly_map.size() !=
          std::size_t{round.primitives} * result.primitive_size) {
        throw InvariantError("assembly map length disagrees with primitive count");
      }
      if (result.strategy != Strategy::naive) {
        seen.clear();
        for (const VertexIndex id : round.shaded_ids) {
          if (!seen.insert(id).second) {
            throw InvariantError("vertex " + std::to_string(id) + " shaded twice in one round");
          }
        }
      }
      for (const std::uint32_t rank : round.assembly_map) {
        if (rank >= round.shaded_ids.size()) {
          throw InvariantError("assembly map entry past the shaded list");
        }
        if (slot >= indices.size() || round.shaded_ids[rank] != indices[slot]) {
          throw InvariantError("assembly map does not reproduce slot " + std::to_string(slot));
        }
        ++slot;
      }
    }
    if (slot != b.batch.end) {
      throw InvariantError("batch starting at " + std::to_string(b.batch.begin) +
                           " not fully consumed");
    }
  }
}

}  // namespace vrlab
