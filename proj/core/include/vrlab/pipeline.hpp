#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "vrlab/analytics.hpp"
#include "vrlab/batching.hpp"
#include "vrlab/dedup.hpp"
#include "vrlab/mesh.hpp"

namespace vrlab {

// Output record of the vertex stage. 20 bytes on the wire: id, then x y z w.
struct ShadedVertex {
  VertexIndex id = kInvalidIndex;
  std::array<float, 4> position{};

  friend bool operator==(const ShadedVertex&, const ShadedVertex&) = default;
};

struct ShadedTriangle {
  std::array<ShadedVertex, 3> corners;

  friend bool operator==(const ShadedTriangle&, const ShadedTriangle&) = default;
};

// Pure vertex routine plus the abstract price of one call.
struct ShaderFn {
  std::function<ShadedVertex(VertexIndex)> shade;
  std::uint64_t cycles_per_invocation = 0;
};

// Fixed model-view-projection transform of the mesh positions.
ShaderFn transform_shader(const IndexedMesh& mesh, std::uint64_t cycles_per_invocation = 0);

// FIFO of emitted triangles, consumed in emission order.
class TriangleQueue {
 public:
  TriangleQueue() = default;
  explicit TriangleQueue(std::vector<ShadedTriangle> items) : items_(std::move(items)) {}

  void push(const ShadedTriangle& t) { items_.push_back(t); }
  bool empty() const noexcept { return head_ == items_.size(); }
  std::size_t size() const noexcept { return items_.size() - head_; }
  const ShadedTriangle* try_pop() noexcept { return empty() ? nullptr : &items_[head_++]; }
  std::span<const ShadedTriangle> pending() const noexcept {
    return std::span(items_).subspan(head_);
  }

 private:
  std::vector<ShadedTriangle> items_;
  std::size_t head_ = 0;
};

struct StrategyRun {
  TriangleQueue triangles;
  DedupResult dedup;
  ReuseReport report;
};

StrategyRun run_naive(const IndexedMesh& mesh, std::span<const Batch> batches,
                      const ShaderFn& shader, const BatchConfig& cfg = {},
                      ExecutionOptions exec = {});
StrategyRun run_warp_voting(const IndexedMesh& mesh, std::span<const Batch> batches,
                            const BatchConfig& cfg, const ShaderFn& shader,
                            ExecutionOptions exec = {});
StrategyRun run_sorting(const IndexedMesh& mesh, std::span<const Batch> batches,
                        const BatchConfig& cfg, const ShaderFn& shader,
                        ExecutionOptions exec = {});
StrategyRun run_hashing(const IndexedMesh& mesh, std::span<const Batch> batches,
                        const BatchConfig& cfg, const HashConfig& hash, const ShaderFn& shader,
                        ExecutionOptions exec = {});
StrategyRun run_parallel_hashing(const IndexedMesh& mesh, std::span<const Batch> batches,
                                 const BatchConfig& cfg, const HashConfig& hash,
                                 const ShaderFn& shader, ExecutionOptions exec = {});

// Dispatches to the matching run_* and forms the batches it expects.
StrategyRun run_strategy(Strategy strategy, const IndexedMesh& mesh, const BatchConfig& cfg,
                         const HashConfig& hash, const ShaderFn& shader,
                         ExecutionOptions exec = {}, std::string scene = "mesh");

// Little-endian binary stream: per triangle three records of
// u32 id, f32 x, f32 y, f32 z, f32 w.
void write_triangle_stream(std::ostream& out, std::span<const ShadedTriangle> triangles);
std::vector<ShadedTriangle> read_triangle_stream(std::istream& in);

}  // namespace vrlab
