#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vrlab/batching.hpp"
#include "vrlab/mesh.hpp"
#include "vrlab/parallel.hpp"

namespace vrlab {

enum class Strategy { naive, warp_voting, sorting, hashing, parallel_hashing };

// Short names used on the command line and in reports: naive, warp, sort,
// hash, phash.
std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view name) noexcept;

// Dynamic strategies consume dynamic_batches; the others take static ones.
constexpr bool is_dynamic(Strategy s) noexcept {
  return s == Strategy::sorting || s == Strategy::hashing || s == Strategy::parallel_hashing;
}

// Open-addressing table used by the hashing strategies.
struct HashConfig {
  std::uint32_t table_size = 256;         // power of two, >= BatchConfig::max_unique
  std::uint32_t multiplier = 2654435769u;  // odd; Fibonacci hashing by default
  std::uint32_t max_fast_probes = 4;      // per-thread probe budget of parallel hashing

  void validate(const BatchConfig& cfg) const;

  // Multiplicative hash: top log2(table_size) bits of id * multiplier mod 2^32.
  std::uint32_t slot_of(VertexIndex id) const noexcept;
};

struct ProbeStats {
  std::uint64_t insertions = 0;
  std::uint64_t total_probes = 0;  // slot examinations, fast and slow path
  std::uint64_t max_chain = 0;     // longest per-insertion probe count
  std::uint64_t fast_probes = 0;   // parallel hashing: per-thread slot examinations
  std::uint64_t slow_steps = 0;    // parallel hashing: warp-wide scan steps
  std::uint64_t slow_insertions = 0;

  ProbeStats& operator+=(const ProbeStats& other) noexcept;
  friend bool operator==(const ProbeStats&, const ProbeStats&) = default;
};

// One shading pass of a thread group.
//
// `shaded_ids[k]` is the vertex lane k shades. `assembly_map` has one entry per
// consumed index slot of this round and points into `shaded_ids`. For the
// dedup strategies shaded_ids has no duplicates; the naive baseline shades one
// entry per slot and so repeats ids freely.
struct DedupRound {
  std::vector<VertexIndex> shaded_ids;
  std::vector<std::uint32_t> assembly_map;
  std::uint32_t primitives = 0;

  friend bool operator==(const DedupRound&, const DedupRound&) = default;
};

struct BatchDedup {
  Batch batch;
  std::vector<DedupRound> rounds;
  ProbeStats probes;

  std::uint64_t invocations() const noexcept;
  std::uint64_t indices_consumed() const noexcept;
  friend bool operator==(const BatchDedup&, const BatchDedup&) = default;
};

struct DedupResult {
  Strategy strategy = Strategy::naive;
  std::uint32_t primitive_size = 3;
  std::vector<BatchDedup> batches;

  std::uint64_t invocations() const noexcept;
  std::uint64_t indices_consumed() const noexcept;
  std::uint64_t primitives() const noexcept;
  ProbeStats probes() const noexcept;
  friend bool operator==(const DedupResult&, const DedupResult&) = default;
};

// Per-batch kernels. Each is a pure function of its inputs.
BatchDedup dedup_batch_naive(std::span<const VertexIndex> indices, Batch batch,
                             const BatchConfig& cfg);
BatchDedup dedup_batch_warp_voting(std::span<const VertexIndex> indices, Batch batch,
                                   const BatchConfig& cfg);
BatchDedup dedup_batch_sorting(std::span<const VertexIndex> indices, Batch batch,
                               const BatchConfig& cfg);
BatchDedup dedup_batch_hashing(std::span<const VertexIndex> indices, Batch batch,
                               const BatchConfig& cfg, const HashConfig& hash);
BatchDedup dedup_batch_parallel_hashing(std::span<const VertexIndex> indices, Batch batch,
                                        const BatchConfig& cfg, const HashConfig& hash);

// Batches of the kind `strategy` expects.
std::vector<Batch> make_batches(Strategy strategy, std::span<const VertexIndex> indices,
                                const BatchConfig& cfg);

// Runs the kernel of `strategy` over every batch; batches may be processed
// concurrently, results are always in batch order.
DedupResult deduplicate(Strategy strategy, std::span<const VertexIndex> indices,
                        std::span<const Batch> batches, const BatchConfig& cfg,
                        const HashConfig& hash = {}, ExecutionOptions exec = {});

// Verifies that replaying the assembly maps reproduces `indices` over the
// covered batches and that dedup rounds contain no duplicate ids. Throws
// InvariantError otherwise.
void check_dedup(const DedupResult& result, std::span<const VertexIndex> indices);

// Shades every entry of every round and rebuilds the primitive stream through
// the assembly maps. Returns one record per consumed index slot, in input
// order. `shade` must be safe to call concurrently when exec.workers > 1.
template <class Record, class ShadeFn>
std::vector<Record> shade_and_assemble(const DedupResult& result, ShadeFn&& shade,
                                       ExecutionOptions exec = {}) {
  std::vector<std::size_t> first_slot(result.batches.size() + 1, 0);
  for (std::size_t b = 0; b < result.batches.size(); ++b) {
    first_slot[b + 1] = first_slot[b] + result.batches[b].indices_consumed();
  }
  std::vector<Record> out(first_slot.back());
  parallel_for(result.batches.size(), exec.workers, [&](std::size_t b) {
    std::size_t cursor = first_slot[b];
    std::vector<Record> shaded;
    for (const auto& round : result.batches[b].rounds) {
      shaded.clear();
      shaded.reserve(round.shaded_ids.size());
      for (const VertexIndex id : round.shaded_ids) shaded.push_back(shade(id));
      for (const std::uint32_t rank : round.assembly_map) out[cursor++] = shaded[rank];
    }
  });
  return out;
}

}  // namespace vrlab
