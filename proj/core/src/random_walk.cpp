#include "vrlab/random_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "vrlab/error.hpp"

namespace vrlab::walk {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<VertexIndex> to_indices(std::span<const PackedCell> agents) {
  std::vector<VertexIndex> ids(agents.size());
  std::transform(agents.begin(), agents.end(), ids.begin(),
                 [](PackedCell c) { return c.word(); });
  return ids;
}

}  // namespace

std::vector<Gaussian> default_gaussians() {
  return {{0.30, 0.30, 0.08, 4.0}, {0.70, 0.60, 0.12, 3.0}, {0.50, 0.85, 0.05, 6.0}};
}

void WalkConfig::validate() const {
  if (grid_width == 0 || grid_height == 0 || grid_width > 65536 || grid_height > 65536) {
    throw ConfigError("grid sides must be in [1, 65536]");
  }
  if (grid_width == 65536 && grid_height == 65536) {
    // Cell (65535, 65535) would pack to the reserved sentinel id.
    throw ConfigError("a 65536 x 65536 grid collides with the reserved sentinel index");
  }
  if (max_move_distance == 0 || max_move_distance > 255) {
    throw ConfigError("max move distance must be in [1, 255]");
  }
  if (kept_moves == 0 || kept_moves > candidate_offsets(max_move_distance).size()) {
    throw ConfigError("kept moves must be between 1 and the candidate move count");
  }
  if (!(base_activity > 0.0)) throw ConfigError("base activity must be positive");
  for (const auto& g : gaussians) {
    if (!(g.sigma > 0.0) || g.amplitude < 0.0) {
      throw ConfigError("gaussian needs positive sigma and non-negative amplitude");
    }
  }
}

PackedCell::PackedCell(std::uint32_t x, std::uint32_t y) {
  if (x > 0xFFFFu || y > 0xFFFFu) throw ConfigError("cell coordinate exceeds 16 bits");
  word_ = (y << 16) | x;
}

std::vector<Offset> candidate_offsets(std::uint32_t max_distance) {
  std::vector<Offset> out;
  const int r = static_cast<int>(max_distance);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int d2 = dx * dx + dy * dy;
      if (d2 >= 1 && d2 <= r * r) out.push_back({dx, dy});
    }
  }
  return out;
}

ActivityField::ActivityField(const WalkConfig& cfg)
    : cfg_(cfg), offsets_(candidate_offsets(cfg.max_move_distance)) {
  cfg_.validate();
  values_.resize(std::size_t{cfg_.grid_width} * cfg_.grid_height);
  const double side = std::max(cfg_.grid_width, cfg_.grid_height);
  for (std::uint32_t y = 0; y < cfg_.grid_height; ++y) {
    for (std::uint32_t x = 0; x < cfg_.grid_width; ++x) {
      double a = cfg_.base_activity;
      for (const auto& g : cfg_.gaussians) {
        const double dx = x - g.cx * cfg_.grid_width;
        const double dy = y - g.cy * cfg_.grid_height;
        const double s = g.sigma * side;
        a += g.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
      }
      values_[std::size_t{y} * cfg_.grid_width + x] = a;
    }
  }
}

MoveList cell_likelihoods(PackedCell cell, const ActivityField& field) {
  const auto& cfg = field.config();
  if (cell.x() >= cfg.grid_width || cell.y() >= cfg.grid_height) {
    throw ConfigError("cell outside the grid");
  }
  // (activity, offset position); the position breaks ties in scan order.
  std::vector<std::pair<double, std::uint32_t>> candidates;
  candidates.reserve(field.offsets().size());
  double total = 0.0;
  const auto& offsets = field.offsets();
  for (std::uint32_t k = 0; k < offsets.size(); ++k) {
    const long nx = long{cell.x()} + offsets[k].dx;
    const long ny = long{cell.y()} + offsets[k].dy;
    if (nx < 0 || ny < 0 || nx >= long{cfg.grid_width} || ny >= long{cfg.grid_height}) continue;
    const double a = field.at(static_cast<std::uint32_t>(nx), static_cast<std::uint32_t>(ny));
    candidates.emplace_back(a, k);
    total += a;
  }

  const std::size_t keep = std::min<std::size_t>(cfg.kept_moves, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), [](const auto& a, const auto& b) {
                      return a.first > b.first || (a.first == b.first && a.second < b.second);
                    });
  MoveList out;
  out.moves.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.moves.push_back({offsets[candidates[i].second], candidates[i].first / total});
  }
  return out;
}

MoveList cell_likelihoods(PackedCell cell, const WalkConfig& cfg) {
  return cell_likelihoods(cell, ActivityField(cfg));
}

double agent_uniform(std::uint64_t seed, std::uint64_t step, std::uint64_t agent) noexcept {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(step ^ splitmix64(agent)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

PackedCell sample_move(PackedCell from, const MoveList& moves, double u) noexcept {
  if (moves.moves.empty()) return from;
  double total = 0.0;
  for (const auto& m : moves.moves) total += m.likelihood;
  const double target = u * total;
  double acc = 0.0;
  const Move* chosen = &moves.moves.back();
  for (const auto& m : moves.moves) {
    acc += m.likelihood;
    if (target < acc) {
      chosen = &m;
      break;
    }
  }
  return PackedCell(static_cast<std::uint32_t>(long{from.x()} + chosen->offset.dx),
                    static_cast<std::uint32_t>(long{from.y()} + chosen->offset.dy));
}

std::vector<PackedCell> place_agents(const WalkConfig& cfg, Placement placement) {
  cfg.validate();
  std::mt19937_64 rng(cfg.rng_seed ^ 0xA5A5A5A5DEADBEEFull);
  const std::uint32_t w =
      placement == Placement::quadrant ? std::max(1u, cfg.grid_width / 2) : cfg.grid_width;
  const std::uint32_t h =
      placement == Placement::quadrant ? std::max(1u, cfg.grid_height / 2) : cfg.grid_height;
  std::vector<PackedCell> agents;
  agents.reserve(cfg.agents);
  for (std::uint32_t a = 0; a < cfg.agents; ++a) {
    const auto x = static_cast<std::uint32_t>(rng() % w);
    const auto y = static_cast<std::uint32_t>(rng() % h);
    agents.emplace_back(x, y);
  }
  return agents;
}

BatchConfig walk_batch_config() {
  BatchConfig cfg;
  cfg.primitive_size = 1;
  return cfg;
}

StepResult step_with_reuse(std::span<const PackedCell> agents, const ActivityField& field,
                           std::uint64_t step, Strategy strategy, const BatchConfig& batch,
                           const HashConfig& hash, ExecutionOptions exec) {
  if (batch.primitive_size != 1) throw ConfigError("walk batches use primitive size 1");
  const auto ids = to_indices(agents);
  const auto batches = make_batches(strategy, ids, batch);
  const auto dedup = deduplicate(strategy, ids, batches, batch, hash, exec);

  StepResult out;
  out.report = build_report("walk_step_" + std::to_string(step), dedup, ids, 0);
  const auto per_agent = shade_and_assemble<MoveList>(
      dedup, [&](VertexIndex id) { return cell_likelihoods(PackedCell::from_word(id), field); },
      exec);

  out.positions.resize(agents.size());
  const std::uint64_t seed = field.config().rng_seed;
  parallel_for(agents.size(), exec.workers, [&](std::size_t a) {
    out.positions[a] = sample_move(agents[a], per_agent[a], agent_uniform(seed, step, a));
  });
  return out;
}

std::vector<PackedCell> step_per_agent(std::span<const PackedCell> agents,
                                       const ActivityField& field, std::uint64_t step) {
  std::vector<PackedCell> out(agents.size());
  const std::uint64_t seed = field.config().rng_seed;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    out[a] = sample_move(agents[a], cell_likelihoods(agents[a], field),
                         agent_uniform(seed, step, a));
  }
  return out;
}

WalkResult run_walk(const WalkConfig& cfg, std::vector<PackedCell> initial,
                    std::optional<Strategy> strategy, const BatchConfig& batch,
                    const HashConfig& hash, ExecutionOptions exec) {
  const ActivityField field(cfg);
  WalkResult result;
  result.trajectory.reserve(cfg.steps + 1);
  result.trajectory.push_back(std::move(initial));
  for (std::uint32_t step = 0; step < cfg.steps; ++step) {
    const auto& current = result.trajectory.back();
    if (strategy) {
      auto s = step_with_reuse(current, field, step, *strategy, batch, hash, exec);
      result.step_reports.push_back(std::move(s.report));
      result.trajectory.push_back(std::move(s.positions));
    } else {
      result.trajectory.push_back(step_per_agent(current, field, step));
    }
  }
  return result;
}

}  // namespace vrlab::walk
