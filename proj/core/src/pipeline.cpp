#include "vrlab/pipeline.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "vrlab/error.hpp"

namespace vrlab {
namespace {

StrategyRun execute(Strategy strategy, const IndexedMesh& mesh, std::span<const Batch> batches,
                    const BatchConfig& cfg, const HashConfig& hash, const ShaderFn& shader,
                    ExecutionOptions exec, std::string scene) {
  validate(mesh);
  if (cfg.primitive_size != IndexedMesh::kPrimitiveSize) {
    throw ConfigError("mesh strategies need primitive size 3");
  }
  if (!shader.shade) throw ConfigError("shader function is empty");

  StrategyRun run;
  run.dedup = deduplicate(strategy, mesh.indices, batches, cfg, hash, exec);
  run.report = build_report(std::move(scene), run.dedup, mesh.indices, mesh.vertex_count());

  const auto corners = shade_and_assemble<ShadedVertex>(run.dedup, shader.shade, exec);
  std::vector<ShadedTriangle> triangles(corners.size() / 3);
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    triangles[t].corners = {corners[3 * t], corners[3 * t + 1], corners[3 * t + 2]};
  }
  run.triangles = TriangleQueue(std::move(triangles));
  return run;
}

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 4);
  const auto bits = std::bit_cast<std::uint32_t>(value);
  const char bytes[4] = {char(bits & 0xFF), char((bits >> 8) & 0xFF), char((bits >> 16) & 0xFF),
                         char((bits >> 24) & 0xFF)};
  out.write(bytes, 4);
}

template <class T>
bool get_le(std::istream& in, T& value) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) return false;
  const std::uint32_t bits = std::uint32_t{bytes[0]} | std::uint32_t{bytes[1]} << 8 |
                             std::uint32_t{bytes[2]} << 16 | std::uint32_t{bytes[3]} << 24;
  value = std::bit_cast<T>(bits);
  return true;
}

}  // namespace

ShaderFn transform_shader(const IndexedMesh& mesh, std::uint64_t cycles_per_invocation) {
  // Perspective view of the unit cube from (0, 0, 3) looking down -z.
  static constexpr float mvp[4][4] = {{1.2f, 0.0f, 0.0f, 0.0f},
                                      {0.0f, 1.6f, 0.0f, 0.0f},
                                      {0.0f, 0.0f, -1.02f, 2.86f},
                                      {0.0f, 0.0f, -1.0f, 3.0f}};
  const std::vector<Vec3>* positions = &mesh.positions;
  ShaderFn fn;
  fn.cycles_per_invocation = cycles_per_invocation;
  fn.shade = [positions](VertexIndex id) {
    const Vec3& p = (*positions)[id];
    const float in[4] = {p.x, p.y, p.z, 1.0f};
    ShadedVertex v;
    v.id = id;
    for (int r = 0; r < 4; ++r) {
      float acc = 0.0f;
      for (int c = 0; c < 4; ++c) acc += mvp[r][c] * in[c];
      v.position[r] = acc;
    }
    return v;
  };
  return fn;
}

StrategyRun run_naive(const IndexedMesh& mesh, std::span<const Batch> batches,
                      const ShaderFn& shader, const BatchConfig& cfg, ExecutionOptions exec) {
  return execute(Strategy::naive, mesh, batches, cfg, {}, shader, exec, "mesh");
}

StrategyRun run_warp_voting(const IndexedMesh& mesh, std::span<const Batch> batches,
                            const BatchConfig& cfg, const ShaderFn& shader,
                            ExecutionOptions exec) {
  return execute(Strategy::warp_voting, mesh, batches, cfg, {}, shader, exec, "mesh");
}

StrategyRun run_sorting(const IndexedMesh& mesh, std::span<const Batch> batches,
                        const BatchConfig& cfg, const ShaderFn& shader, ExecutionOptions exec) {
  return execute(Strategy::sorting, mesh, batches, cfg, {}, shader, exec, "mesh");
}

StrategyRun run_hashing(const IndexedMesh& mesh, std::span<const Batch> batches,
                        const BatchConfig& cfg, const HashConfig& hash, const ShaderFn& shader,
                        ExecutionOptions exec) {
  return execute(Strategy::hashing, mesh, batches, cfg, hash, shader, exec, "mesh");
}

StrategyRun run_parallel_hashing(const IndexedMesh& mesh, std::span<const Batch> batches,
                                 const BatchConfig& cfg, const HashConfig& hash,
                                 const ShaderFn& shader, ExecutionOptions exec) {
  return execute(Strategy::parallel_hashing, mesh, batches, cfg, hash, shader, exec, "mesh");
}

StrategyRun run_strategy(Strategy strategy, const IndexedMesh& mesh, const BatchConfig& cfg,
                         const HashConfig& hash, const ShaderFn& shader, ExecutionOptions exec,
                         std::string scene) {
  const auto batches = make_batches(strategy, mesh.indices, cfg);
  return execute(strategy, mesh, batches, cfg, hash, shader, exec, std::move(scene));
}

void write_triangle_stream(std::ostream& out, std::span<const ShadedTriangle> triangles) {
  for (const auto& t : triangles) {
    for (const auto& v : t.corners) {
      put_le(out, v.id);
      for (const float f : v.position) put_le(out, f);
    }
  }
  if (!out) throw IoError("failed writing triangle stream");
}

std::vector<ShadedTriangle> read_triangle_stream(std::istream& in) {
  std::vector<ShadedTriangle> out;
  for (;;) {
    ShadedTriangle t;
    for (std::size_t c = 0; c < 3; ++c) {
      auto& v = t.corners[c];
      if (!get_le(in, v.id)) {
        if (c == 0 && in.gcount() == 0) return out;
        throw IoError("truncated triangle stream");
      }
      for (auto& f : v.position) {
        if (!get_le(in, f)) throw IoError("truncated triangle stream");
      }
    }
    out.push_back(t);
  }
}

}  // namespace vrlab
