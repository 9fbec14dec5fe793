#include "vrlab/reorder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <unordered_set>

#include "vrlab/error.hpp"

namespace vrlab {
namespace {

class VertexScorer {
 public:
  explicit VertexScorer(const ReorderParams& p) : p_(p) {}

  double operator()(int cache_position, std::uint32_t active_triangles) const {
    if (active_triangles == 0) return -1.0;
    double score = 0.0;
    if (cache_position >= 0) {
      if (cache_position < 3) {
        score = p_.last_tri_score;
      } else {
        const double scale = 1.0 / static_cast<double>(p_.cache_size - 3);
        score = std::pow(1.0 - (cache_position - 3) * scale, p_.decay_power);
      }
    }
    score += p_.valence_boost_scale *
             std::pow(static_cast<double>(active_triangles), -p_.valence_boost_power);
    return score;
  }

 private:
  ReorderParams p_;
};

}  // namespace

void ReorderParams::validate() const {
  if (cache_size < 3) throw ConfigError("reorder cache size must be at least 3");
  if (!(decay_power > 0 && last_tri_score > 0 && valence_boost_scale > 0 &&
        valence_boost_power > 0)) {
    throw ConfigError("reorder score parameters must be positive");
  }
}

IndexedMesh reorder_forsyth(const IndexedMesh& mesh, const ReorderParams& params) {
  validate(mesh);
  params.validate();
  const std::size_t tri_count = mesh.triangle_count();
  const std::size_t vert_count = mesh.vertex_count();
  IndexedMesh out = mesh;
  if (tri_count <= 1) return out;

  const VertexScorer score_of(params);

  // Adjacency in CSR form; the first active[v] entries of each vertex's range
  // are its not-yet-emitted triangles.
  std::vector<std::uint32_t> active(vert_count, 0);
  for (const VertexIndex v : mesh.indices) ++active[v];
  std::vector<std::size_t> first(vert_count + 1, 0);
  for (std::size_t v = 0; v < vert_count; ++v) first[v + 1] = first[v] + active[v];
  std::vector<std::uint32_t> adjacency(mesh.indices.size());
  {
    std::vector<std::size_t> fill(first.begin(), first.end() - 1);
    for (std::size_t t = 0; t < tri_count; ++t) {
      for (const VertexIndex v : mesh.triangle(t)) adjacency[fill[v]++] = static_cast<std::uint32_t>(t);
    }
  }

  std::vector<int> cache_pos(vert_count, -1);
  std::vector<double> vscore(vert_count);
  for (std::size_t v = 0; v < vert_count; ++v) vscore[v] = score_of(-1, active[v]);
  std::vector<double> tscore(tri_count);
  std::vector<char> emitted(tri_count, 0);
  auto rescore_triangle = [&](std::size_t t) {
    const auto tri = mesh.triangle(t);
    tscore[t] = vscore[tri[0]] + vscore[tri[1]] + vscore[tri[2]];
  };
  for (std::size_t t = 0; t < tri_count; ++t) rescore_triangle(t);

  // Highest score wins, lowest triangle index breaks ties.
  auto better = [&](std::size_t a, std::size_t b) {
    return tscore[a] > tscore[b] || (tscore[a] == tscore[b] && a < b);
  };

  std::size_t scan_cursor = 0;
  auto global_best = [&]() {
    while (scan_cursor < tri_count && emitted[scan_cursor]) ++scan_cursor;
    std::size_t best = scan_cursor;
    for (std::size_t t = scan_cursor + 1; t < tri_count; ++t) {
      if (!emitted[t] && better(t, best)) best = t;
    }
    return best;
  };

  std::vector<VertexIndex> cache;
  std::vector<VertexIndex> next_cache;
  cache.reserve(params.cache_size + 3);
  next_cache.reserve(params.cache_size + 3);

  std::size_t best = global_best();
  for (std::size_t emitted_count = 0; emitted_count < tri_count; ++emitted_count) {
    const auto tri = mesh.triangle(best);
    std::copy(tri.begin(), tri.end(), out.indices.begin() + 3 * emitted_count);
    emitted[best] = 1;

    for (const VertexIndex v : tri) {
      // Move `best` out of the active prefix of v's adjacency range.
      auto* begin = adjacency.data() + first[v];
      auto* end = begin + active[v];
      auto* it = std::find(begin, end, static_cast<std::uint32_t>(best));
      if (it != end) {
        std::iter_swap(it, end - 1);
        --active[v];
      }
    }

    next_cache.clear();
    for (const VertexIndex v : tri) {
      if (std::find(next_cache.begin(), next_cache.end(), v) == next_cache.end()) {
        next_cache.push_back(v);
      }
    }
    for (const VertexIndex v : cache) {
      if (std::find(next_cache.begin(), next_cache.end(), v) == next_cache.end()) {
        next_cache.push_back(v);
      }
    }

    for (std::size_t slot = 0; slot < next_cache.size(); ++slot) {
      const VertexIndex v = next_cache[slot];
      cache_pos[v] = slot < params.cache_size ? static_cast<int>(slot) : -1;
      vscore[v] = score_of(cache_pos[v], active[v]);
    }
    bool have_candidate = false;
    std::size_t candidate = 0;
    for (const VertexIndex v : next_cache) {
      for (std::size_t k = first[v]; k < first[v] + active[v]; ++k) {
        const std::size_t t = adjacency[k];
        rescore_triangle(t);
        if (!have_candidate || better(t, candidate)) {
          candidate = t;
          have_candidate = true;
        }
      }
    }
    if (next_cache.size() > params.cache_size) next_cache.resize(params.cache_size);
    cache.swap(next_cache);

    if (emitted_count + 1 == tri_count) break;
    best = have_candidate ? candidate : global_best();
  }
  return out;
}

double acmr(std::span<const VertexIndex> indices, std::uint32_t fifo_size) {
  if (fifo_size == 0) throw ConfigError("FIFO size must be at least 1");
  if (indices.size() % 3 != 0) throw ConfigError("ACMR needs a triangle-aligned buffer");
  if (indices.empty()) return 0.0;
  std::deque<VertexIndex> fifo;
  std::unordered_set<VertexIndex> resident;
  std::uint64_t misses = 0;
  for (const VertexIndex id : indices) {
    if (resident.contains(id)) continue;
    ++misses;
    fifo.push_back(id);
    resident.insert(id);
    if (fifo.size() > fifo_size) {
      resident.erase(fifo.front());
      fifo.pop_front();
    }
  }
  return static_cast<double>(misses) / static_cast<double>(indices.size() / 3);
}

}  // namespace vrlab
