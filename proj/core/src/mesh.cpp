#include "vrlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>

#include "vrlab/error.hpp"

namespace vrlab {

void validate(const IndexedMesh& mesh) {
  if (mesh.indices.size() % IndexedMesh::kPrimitiveSize != 0) {
    throw ConfigError("index count " + std::to_string(mesh.indices.size()) +
                      " is not a multiple of 3");
  }
  if (!mesh.indices.empty() && mesh.positions.empty()) {
    throw ConfigError("mesh has indices but no vertices");
  }
  const auto vertex_count = mesh.positions.size();
  for (std::size_t i = 0; i < mesh.indices.size(); ++i) {
    if (mesh.indices[i] >= vertex_count) {
      throw ConfigError("index slot " + std::to_string(i) + " references vertex " +
                        std::to_string(mesh.indices[i]) + " but only " +
                        std::to_string(vertex_count) + " exist");
    }
  }
  if (mesh.attribute_stride != 0 &&
      mesh.attributes.size() != mesh.attribute_stride * vertex_count) {
    throw ConfigError("attribute payload size does not match vertex count");
  }
  if (mesh.attribute_stride == 0 && !mesh.attributes.empty()) {
    throw ConfigError("attribute payload present with zero stride");
  }
}

IndexedMesh gen_icosphere(unsigned subdivisions) {
  if (subdivisions > 8) {
    throw ConfigError("icosphere subdivisions must be <= 8");
  }
  const float t = (1.0f + std::sqrt(5.0f)) / 2.0f;
  IndexedMesh mesh;
  mesh.positions = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                    {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                    {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  mesh.indices = {0, 11, 5,  0, 5,  1, 0, 1, 7, 0, 7,  10, 0, 10, 11,
                  1, 5,  9,  5, 11, 4, 11, 10, 2, 10, 7, 6, 7, 1,  8,
                  3, 9,  4,  3, 4,  2, 3, 2, 6, 3, 6,  8, 3, 8,  9,
                  4, 9,  5,  2, 4,  11, 6, 2, 10, 8, 6, 7, 9, 8, 1};

  auto normalize = [](Vec3 v) {
    const float len = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    return Vec3{v.x / len, v.y / len, v.z / len};
  };
  for (auto& p : mesh.positions) p = normalize(p);

  for (unsigned level = 0; level < subdivisions; ++level) {
    std::map<std::pair<VertexIndex, VertexIndex>, VertexIndex> midpoints;
    auto midpoint = [&](VertexIndex a, VertexIndex b) {
      const auto key = std::minmax(a, b);
      auto [it, inserted] = midpoints.try_emplace(key, 0);
      if (inserted) {
        const Vec3& pa = mesh.positions[a];
        const Vec3& pb = mesh.positions[b];
        it->second = static_cast<VertexIndex>(mesh.positions.size());
        mesh.positions.push_back(
            normalize({(pa.x + pb.x) * 0.5f, (pa.y + pb.y) * 0.5f, (pa.z + pb.z) * 0.5f}));
      }
      return it->second;
    };

    std::vector<VertexIndex> next;
    next.reserve(mesh.indices.size() * 4);
    for (std::size_t tri = 0; tri < mesh.triangle_count(); ++tri) {
      const auto [a, b, c] = mesh.triangle(tri);
      const VertexIndex ab = midpoint(a, b);
      const VertexIndex bc = midpoint(b, c);
      const VertexIndex ca = midpoint(c, a);
      next.insert(next.end(), {a, ab, ca, b, bc, ab, c, ca, bc, ab, bc, ca});
    }
    mesh.indices = std::move(next);
  }
  return mesh;
}

IndexedMesh gen_grid(unsigned rows, unsigned cols) {
  if (rows < 2 || cols < 2) {
    throw ConfigError("grid needs at least 2 rows and 2 columns");
  }
  IndexedMesh mesh;
  mesh.positions.reserve(std::size_t{rows} * cols);
  for (unsigned r = 0; r < rows; ++r) {
    for (unsigned c = 0; c < cols; ++c) {
      mesh.positions.push_back({static_cast<float>(c), static_cast<float>(r), 0.0f});
    }
  }
  mesh.indices.reserve(6 * std::size_t{rows - 1} * (cols - 1));
  for (unsigned r = 0; r + 1 < rows; ++r) {
    for (unsigned c = 0; c + 1 < cols; ++c) {
      const VertexIndex v00 = r * cols + c;
      const VertexIndex v01 = v00 + 1;
      const VertexIndex v10 = v00 + cols;
      const VertexIndex v11 = v10 + 1;
      mesh.indices.insert(mesh.indices.end(), {v00, v10, v01, v01, v10, v11});
    }
  }
  return mesh;
}

IndexedMesh shuffle_triangles(const IndexedMesh& mesh, std::uint64_t seed) {
  const std::size_t n = mesh.triangle_count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Fisher-Yates driven by the raw engine output; std::shuffle and the
  // standard distributions are not portable across library implementations.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  IndexedMesh out = mesh;
  for (std::size_t t = 0; t < n; ++t) {
    const auto tri = mesh.triangle(order[t]);
    std::copy(tri.begin(), tri.end(), out.indices.begin() + 3 * t);
  }
  return out;
}

std::uint64_t VertexShadingCounts::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Rgb heatmap_color(std::uint32_t count) noexcept {
  if (count == 0) return {128, 128, 128};
  const std::uint32_t clamped = std::min<std::uint32_t>(count, 6);
  const double t = static_cast<double>(clamped - 1) / 5.0;
  return {static_cast<std::uint8_t>(std::lround(255.0 * t)),
          static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - t))), 0};
}

void write_heatmap_ply(const IndexedMesh& mesh, const VertexShadingCounts& counts,
                       std::ostream& out) {
  if (counts.counts.size() != mesh.vertex_count()) {
    throw ConfigError("shading counts do not match mesh vertex count");
  }
  out << "ply\nformat ascii 1.0\n"
      << "element vertex " << mesh.vertex_count() << '\n'
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "element face " << mesh.triangle_count() << '\n'
      << "property list uchar int vertex_indices\n"
      << "end_header\n";
  out.precision(9);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    const auto& p = mesh.positions[v];
    const Rgb c = heatmap_color(counts.counts[v]);
    out << p.x << ' ' << p.y << ' ' << p.z << ' ' << int{c.r} << ' ' << int{c.g} << ' '
        << int{c.b} << '\n';
  }
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto [a, b, c] = mesh.triangle(t);
    out << "3 " << a << ' ' << b << ' ' << c << '\n';
  }
}

void export_heatmap_ply(const IndexedMesh& mesh, const VertexShadingCounts& counts,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_heatmap_ply(mesh, counts, out);
  if (!out) throw IoError("failed writing " + path.string());
}

std::size_t count_unique(std::span<const VertexIndex> indices) {
  std::unordered_set<VertexIndex> seen(indices.begin(), indices.end());
  return seen.size();
}

}  // namespace vrlab
