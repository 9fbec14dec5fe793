#include "vrlab/warp.hpp"

namespace vrlab::simd {

LaneMask ballot(const std::vector<bool>& predicates) {
  const auto width = static_cast<unsigned>(predicates.size());
  return ballot_if(width, [&](unsigned lane) { return predicates[lane]; });
}

}  // namespace vrlab::simd
