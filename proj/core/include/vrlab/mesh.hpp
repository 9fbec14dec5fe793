#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace vrlab {

using VertexIndex = std::uint32_t;

// Lanes past a batch end carry this value; it is never a valid vertex id.
inline constexpr VertexIndex kInvalidIndex = 0xFFFFFFFFu;

struct Vec3 {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

// Vertex buffer plus triangle index buffer.
//
// `attributes` is an opaque per-vertex payload of `attribute_stride` bytes per
// vertex. Nothing in the dedup layer reads it; it exists so callers can attach
// shading inputs without the library interpreting them.
struct IndexedMesh {
  static constexpr std::size_t kPrimitiveSize = 3;

  std::vector<Vec3> positions;
  std::vector<std::byte> attributes;
  std::size_t attribute_stride = 0;
  std::vector<VertexIndex> indices;

  std::size_t vertex_count() const noexcept { return positions.size(); }
  std::size_t triangle_count() const noexcept { return indices.size() / kPrimitiveSize; }

  std::array<VertexIndex, 3> triangle(std::size_t t) const {
    return {indices[3 * t], indices[3 * t + 1], indices[3 * t + 2]};
  }
};

// Throws ConfigError if any IndexedMesh invariant is broken.
void validate(const IndexedMesh& mesh);

// Wavefront OBJ. Polygons are fan-triangulated in declaration order, negative
// (relative) indices are resolved, and everything but "v" and "f" is ignored.
IndexedMesh parse_obj(std::istream& in);
IndexedMesh load_obj(const std::filesystem::path& path);
void write_obj(const IndexedMesh& mesh, std::ostream& out);
void save_obj(const IndexedMesh& mesh, const std::filesystem::path& path);

// Loop-split icosahedron on the unit sphere; subdivisions <= 8.
IndexedMesh gen_icosphere(unsigned subdivisions);

// rows x cols lattice in the z=0 plane, two triangles per cell, row-major.
IndexedMesh gen_grid(unsigned rows, unsigned cols);

// Permutes triangle order (corner order within each triangle is kept).
IndexedMesh shuffle_triangles(const IndexedMesh& mesh, std::uint64_t seed);

// How many shader invocations were attributed to each vertex.
struct VertexShadingCounts {
  std::vector<std::uint32_t> counts;

  std::uint64_t total() const noexcept;
  friend bool operator==(const VertexShadingCounts&, const VertexShadingCounts&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Green at one invocation, red at six or more, linear in between. Vertices
// nobody shaded are gray.
Rgb heatmap_color(std::uint32_t count) noexcept;

void write_heatmap_ply(const IndexedMesh& mesh, const VertexShadingCounts& counts,
                       std::ostream& out);
void export_heatmap_ply(const IndexedMesh& mesh, const VertexShadingCounts& counts,
                        const std::filesystem::path& path);

// Number of distinct ids in the buffer.
std::size_t count_unique(std::span<const VertexIndex> indices);

}  // namespace vrlab
