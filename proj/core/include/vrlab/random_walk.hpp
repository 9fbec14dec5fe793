#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vrlab/analytics.hpp"
#include "vrlab/batching.hpp"
#include "vrlab/dedup.hpp"
#include "vrlab/parallel.hpp"

// Agents on a grid choose their next cell from the most likely moves of their
// current cell. All agents on one cell share that computation, so agent
// positions are packed into 32-bit virtual indices and pushed through the same
// dedup strategies as mesh vertices.

namespace vrlab::walk {

// Gaussian bump of the activity field, in grid-relative units: centers in
// [0, 1] of the grid extent, sigma as a fraction of the larger side.
struct Gaussian {
  double cx = 0.5;
  double cy = 0.5;
  double sigma = 0.1;
  double amplitude = 1.0;
};

std::vector<Gaussian> default_gaussians();

struct WalkConfig {
  std::uint32_t grid_width = 256;
  std::uint32_t grid_height = 256;
  std::uint32_t agents = 300000;
  std::uint32_t max_move_distance = 16;
  std::uint32_t kept_moves = 8;
  double base_activity = 1.0;
  std::vector<Gaussian> gaussians = default_gaussians();
  std::uint32_t steps = 10;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

// y in the high half, x in the low half.
class PackedCell {
 public:
  PackedCell() = default;
  PackedCell(std::uint32_t x, std::uint32_t y);
  static PackedCell from_word(std::uint32_t word) noexcept {
    PackedCell c;
    c.word_ = word;
    return c;
  }

  std::uint32_t word() const noexcept { return word_; }
  std::uint32_t x() const noexcept { return word_ & 0xFFFFu; }
  std::uint32_t y() const noexcept { return word_ >> 16; }
  friend bool operator==(const PackedCell&, const PackedCell&) = default;

 private:
  std::uint32_t word_ = 0;
};

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

// Every offset with 1 <= dx^2 + dy^2 <= max_distance^2, row-major (dy, then dx).
std::vector<Offset> candidate_offsets(std::uint32_t max_distance);

struct Move {
  Offset offset;
  double likelihood = 0.0;  // normalized over all in-grid candidates
  friend bool operator==(const Move&, const Move&) = default;
};

// Kept moves of one cell, most likely first; ties keep scan order.
struct MoveList {
  std::vector<Move> moves;
  friend bool operator==(const MoveList&, const MoveList&) = default;
};

// Activity sampled once per cell.
class ActivityField {
 public:
  explicit ActivityField(const WalkConfig& cfg);

  const WalkConfig& config() const noexcept { return cfg_; }
  double at(std::uint32_t x, std::uint32_t y) const noexcept {
    return values_[std::size_t{y} * cfg_.grid_width + x];
  }
  const std::vector<Offset>& offsets() const noexcept { return offsets_; }

 private:
  WalkConfig cfg_;
  std::vector<double> values_;
  std::vector<Offset> offsets_;
};

MoveList cell_likelihoods(PackedCell cell, const ActivityField& field);
MoveList cell_likelihoods(PackedCell cell, const WalkConfig& cfg);

// Uniform in [0, 1), a pure function of (seed, step, agent).
double agent_uniform(std::uint64_t seed, std::uint64_t step, std::uint64_t agent) noexcept;

// Destination chosen with probability proportional to kept likelihood.
PackedCell sample_move(PackedCell from, const MoveList& moves, double u) noexcept;

enum class Placement { uniform, quadrant };

// Initial agent positions; `quadrant` confines them to the lower-left quarter.
std::vector<PackedCell> place_agents(const WalkConfig& cfg, Placement placement);

// Defaults of BatchConfig with primitive size 1.
BatchConfig walk_batch_config();

struct StepResult {
  std::vector<PackedCell> positions;
  ReuseReport report;
};

// One step with the move computation deduplicated by `strategy`.
StepResult step_with_reuse(std::span<const PackedCell> agents, const ActivityField& field,
                           std::uint64_t step, Strategy strategy,
                           const BatchConfig& batch = walk_batch_config(),
                           const HashConfig& hash = {}, ExecutionOptions exec = {});

// Reference: every agent evaluates its own cell.
std::vector<PackedCell> step_per_agent(std::span<const PackedCell> agents,
                                       const ActivityField& field, std::uint64_t step);

struct WalkResult {
  std::vector<std::vector<PackedCell>> trajectory;  // steps + 1 snapshots
  std::vector<ReuseReport> step_reports;            // empty for the per-agent reference
};

// Runs cfg.steps steps. Without a strategy every agent evaluates its own cell.
WalkResult run_walk(const WalkConfig& cfg, std::vector<PackedCell> initial,
                    std::optional<Strategy> strategy,
                    const BatchConfig& batch = walk_batch_config(), const HashConfig& hash = {},
                    ExecutionOptions exec = {});

}  // namespace vrlab::walk
