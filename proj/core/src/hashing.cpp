// Dynamically batched hashing and its two-tier parallel variant.
//
// The GPU kernels insert with atomicCAS in whatever order the hardware picks.
// Here insertions run in ascending slot order (lane 0 first), so probe
// statistics are reproducible. The resulting table layout can differ between
// the two variants, the set of ids it holds cannot.

#include <algorithm>
#include <string>

#include "vrlab/dedup.hpp"
#include "vrlab/error.hpp"
#include "vrlab/warp.hpp"

namespace vrlab {
namespace {

class SharedTable {
 public:
  explicit SharedTable(std::uint32_t size) : slots_(size, kInvalidIndex), mask_(size - 1) {}

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(slots_.size()); }
  std::uint32_t wrap(std::uint64_t p) const noexcept { return static_cast<std::uint32_t>(p) & mask_; }

  // Compare-and-swap on an empty slot. Returns true when `id` now lives at p,
  // either because the slot was free or because it already held `id`.
  bool try_claim(std::uint32_t p, VertexIndex id) noexcept {
    if (slots_[p] == kInvalidIndex) {
      slots_[p] = id;
      return true;
    }
    return slots_[p] == id;
  }

  bool claimable(std::uint32_t p, VertexIndex id) const noexcept {
    return slots_[p] == kInvalidIndex || slots_[p] == id;
  }

  // Compact occupied slots into shaded ids (ascending slot order) and rewrite
  // slot numbers into ranks.
  DedupRound finish(std::vector<std::uint32_t> slot_of_index, std::uint32_t primitive_size) const {
    DedupRound round;
    std::vector<std::uint32_t> rank(slots_.size(), 0);
    for (std::uint32_t j = 0; j < slots_.size(); ++j) {
      if (slots_[j] != kInvalidIndex) {
        rank[j] = static_cast<std::uint32_t>(round.shaded_ids.size());
        round.shaded_ids.push_back(slots_[j]);
      }
    }
    for (auto& s : slot_of_index) s = rank[s];
    round.primitives = static_cast<std::uint32_t>(slot_of_index.size() / primitive_size);
    round.assembly_map = std::move(slot_of_index);
    return round;
  }

 private:
  std::vector<VertexIndex> slots_;
  std::uint32_t mask_;
};

void check_dynamic_batch(Batch batch, const BatchConfig& cfg) {
  if (batch.size() > cfg.max_indices) {
    throw ConfigError("dynamic batch of " + std::to_string(batch.size()) +
                      " indices exceeds the index cap");
  }
}

void check_unique_bound(const DedupRound& round, const BatchConfig& cfg) {
  if (round.shaded_ids.size() > cfg.max_unique) {
    throw ConfigError("dynamic batch holds " + std::to_string(round.shaded_ids.size()) +
                      " unique ids, more than max unique " + std::to_string(cfg.max_unique));
  }
}

// Only reachable when a batch holds more unique ids than the table has slots,
// which the batch splitter rules out.
[[noreturn]] void table_full(Batch batch) {
  throw ConfigError("hash table full while inserting batch at " + std::to_string(batch.begin) +
                    "; batch exceeds the unique bound");
}

}  // namespace

BatchDedup dedup_batch_hashing(std::span<const VertexIndex> indices, Batch batch,
                               const BatchConfig& cfg, const HashConfig& hash) {
  check_dynamic_batch(batch, cfg);
  SharedTable table(hash.table_size);
  BatchDedup out{batch, {}, {}};
  std::vector<std::uint32_t> loc(batch.size());

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const VertexIndex id = indices[batch.begin + i];
    std::uint32_t p = hash.slot_of(id);
    std::uint64_t probes = 0;
    for (;;) {
      ++probes;
      if (table.try_claim(p, id)) break;
      if (probes >= table.size()) table_full(batch);
      p = table.wrap(p + 1);
    }
    loc[i] = p;
    out.probes.insertions += 1;
    out.probes.total_probes += probes;
    out.probes.max_chain = std::max(out.probes.max_chain, probes);
  }

  out.rounds.push_back(table.finish(std::move(loc), cfg.primitive_size));
  check_unique_bound(out.rounds.back(), cfg);
  return out;
}

BatchDedup dedup_batch_parallel_hashing(std::span<const VertexIndex> indices, Batch batch,
                                        const BatchConfig& cfg, const HashConfig& hash) {
  check_dynamic_batch(batch, cfg);
  SharedTable table(hash.table_size);
  BatchDedup out{batch, {}, {}};
  std::vector<std::uint32_t> loc(batch.size());

  struct Pending {
    std::size_t index;
    std::uint32_t next_slot;
    std::uint64_t probes;
  };
  std::vector<Pending> pending;

  // Fast path: every thread probes on its own, up to the budget.
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const VertexIndex id = indices[batch.begin + i];
    std::uint32_t p = hash.slot_of(id);
    std::uint64_t probes = 0;
    bool inserted = false;
    while (probes < hash.max_fast_probes && probes < table.size()) {
      ++probes;
      if (table.try_claim(p, id)) {
        inserted = true;
        break;
      }
      p = table.wrap(p + 1);
    }
    out.probes.fast_probes += probes;
    out.probes.total_probes += probes;
    if (inserted) {
      loc[i] = p;
      out.probes.insertions += 1;
      out.probes.max_chain = std::max(out.probes.max_chain, probes);
    } else {
      pending.push_back({i, p, probes});
    }
  }

  // Slow path: the whole warp scans consecutive windows of slots for each
  // unresolved index in turn, lowest lane first.
  const unsigned window = std::min(cfg.lanes, table.size());
  for (const Pending& job : pending) {
    const VertexIndex id = indices[batch.begin + job.index];
    std::uint32_t start = job.next_slot;
    std::uint64_t steps = 0;
    std::uint64_t scanned = job.probes;
    for (;;) {
      if (scanned >= table.size() + window) table_full(batch);
      ++steps;
      scanned += window;
      const auto hits = simd::ballot_if(cfg.lanes, [&](unsigned lane) {
        return lane < window && table.claimable(table.wrap(start + lane), id);
      });
      if (!hits.none()) {
        const std::uint32_t slot = table.wrap(start + unsigned(simd::ffs(hits) - 1));
        table.try_claim(slot, id);
        loc[job.index] = slot;
        break;
      }
      start = table.wrap(start + window);
    }
    out.probes.slow_steps += steps;
    out.probes.total_probes += steps * window;
    out.probes.slow_insertions += 1;
    out.probes.insertions += 1;
    out.probes.max_chain = std::max(out.probes.max_chain, job.probes + steps);
  }

  out.rounds.push_back(table.finish(std::move(loc), cfg.primitive_size));
  check_unique_bound(out.rounds.back(), cfg);
  return out;
}

}  // namespace vrlab
