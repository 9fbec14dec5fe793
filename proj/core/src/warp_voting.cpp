// Statically batched warp voting.
//
// Lanes fetch W indices at a time and agree on unique ids with shuffles and
// ballots; each new id goes to the lowest free lane. Fetching stops once every
// lane owns a vertex or the batch runs out. Only whole primitives whose
// indices all resolved to a lane are emitted; everything shaded beyond that is
// thrown away and re-fetched by the next round.

#include <algorithm>

#include "vrlab/dedup.hpp"
#include "vrlab/error.hpp"
#include "vrlab/warp.hpp"

namespace vrlab {

using simd::ballot_if;
using simd::ffs;
using simd::Lanes;
using simd::shfl;

BatchDedup dedup_batch_warp_voting(std::span<const VertexIndex> indices, Batch batch,
                                   const BatchConfig& cfg) {
  const unsigned width = cfg.lanes;
  const std::size_t prim = cfg.primitive_size;
  BatchDedup out{batch, {}, {}};

  // Shared inverse lookup: consumed slot -> owning lane, -1 for none.
  std::vector<int> map(batch.size() + width, -1);

  std::size_t cursor = batch.begin;
  while (cursor < batch.end) {
    unsigned fill = 0;
    std::size_t done = 0;
    Lanes<VertexIndex> my_id(width, kInvalidIndex);
    std::size_t offset = cursor;

    while (offset < batch.end && fill < width) {
      Lanes<VertexIndex> incoming(width, kInvalidIndex);
      Lanes<std::uint64_t> outgoing(width, 0);
      for (unsigned lane = 0; lane < width; ++lane) {
        if (offset + lane < batch.end) incoming[lane] = indices[offset + lane];
      }

      for (unsigned i = 0; i < width; ++i) {
        const auto current = shfl(incoming, i);
        std::uint64_t match =
            ballot_if(width, [&](unsigned lane) { return current[lane] == my_id[lane]; }).bits();
        if (match == 0) {
          // Lane `fill` adopts the new id; once the warp is full the id has
          // no owner and the slot is unassignable (empty match).
          if (fill < width) my_id[fill] = current[fill];
          match = fill < width ? std::uint64_t{1} << fill : 0;
          ++fill;
        }
        outgoing[i] = match;
      }

      for (unsigned lane = 0; lane < width; ++lane) {
        map[done + lane] = ffs(outgoing[lane]) - 1;
      }
      const auto firstmask = ballot_if(width, [&](unsigned lane) {
        return outgoing[lane] == 0 || incoming[lane] == kInvalidIndex;
      });
      // Length of the assignable prefix of this fetch.
      const unsigned additional = firstmask.none() ? width : unsigned(ffs(firstmask) - 1);
      done += additional;
      offset += width;
    }

    const std::size_t primitives = done / prim;
    if (primitives == 0) {
      throw InvariantError("warp voting made no progress at index " + std::to_string(cursor));
    }

    DedupRound round;
    const unsigned shaded = std::min(fill, width);
    round.shaded_ids.assign(my_id.values().begin(), my_id.values().begin() + shaded);
    round.assembly_map.resize(primitives * prim);
    for (std::size_t k = 0; k < round.assembly_map.size(); ++k) {
      if (map[k] < 0) throw InvariantError("unassigned slot inside the consumed prefix");
      round.assembly_map[k] = static_cast<std::uint32_t>(map[k]);
    }
    round.primitives = static_cast<std::uint32_t>(primitives);
    out.rounds.push_back(std::move(round));

    cursor += primitives * prim;
  }
  return out;
}

}  // namespace vrlab
