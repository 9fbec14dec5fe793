#include "vrlab/analytics.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>
#include <utility>

#include <nlohmann/json.hpp>

#include "vrlab/error.hpp"

namespace vrlab {
namespace {

double reuse_of(std::uint64_t invocations, std::uint64_t indices) {
  if (indices == 0) return 0.0;
  return 1.0 - static_cast<double>(invocations) / static_cast<double>(indices);
}

std::string format_rate(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

// (group, size, name) sort key for a column label.
std::tuple<int, std::uint64_t, std::string> column_key(const std::string& label) {
  static const std::map<std::string, int, std::less<>> fixed = {
      {"ideal", 0}, {"naive", 2}, {"warp", 3}, {"sort", 4}, {"hash", 5}, {"phash", 6}};
  if (const auto it = fixed.find(label); it != fixed.end()) return {it->second, 0, label};
  if (label.starts_with("cache")) {
    std::uint64_t size = 0;
    const auto digits = label.find_first_of("0123456789");
    if (digits != std::string::npos) {
      std::from_chars(label.data() + digits, label.data() + label.size(), size);
    }
    return {1, size, label};
  }
  return {7, 0, label};
}

nlohmann::json probe_json(const ProbeStats& p) {
  return {{"insertions", p.insertions},   {"total_probes", p.total_probes},
          {"max_chain", p.max_chain},     {"fast_probes", p.fast_probes},
          {"slow_steps", p.slow_steps},   {"slow_insertions", p.slow_insertions}};
}

}  // namespace

ReuseReport build_report(std::string scene, const DedupResult& result,
                         std::span<const VertexIndex> indices, std::size_t vertex_count) {
  check_dedup(result, indices);
  ReuseReport r;
  r.scene = std::move(scene);
  r.strategy = std::string(to_string(result.strategy));
  r.indices = result.indices_consumed();
  r.invocations = result.invocations();
  r.batches = result.batches.size();
  r.reuse_rate = reuse_of(r.invocations, r.indices);

  std::vector<VertexIndex> covered;
  covered.reserve(r.indices);
  for (const auto& b : result.batches) {
    covered.insert(covered.end(), indices.begin() + b.batch.begin, indices.begin() + b.batch.end);
  }
  r.unique_vertices = count_unique(covered);

  if (vertex_count > 0) {
    r.per_vertex.counts.assign(vertex_count, 0);
    for (const auto& b : result.batches) {
      for (const auto& round : b.rounds) {
        for (const VertexIndex id : round.shaded_ids) {
          if (id >= vertex_count) throw InvariantError("shaded id outside vertex buffer");
          ++r.per_vertex.counts[id];
        }
      }
    }
    if (r.per_vertex.total() != r.invocations) {
      throw InvariantError("per-vertex counts do not sum to invocations");
    }
  }
  if (result.strategy == Strategy::hashing || result.strategy == Strategy::parallel_hashing) {
    r.probe_stats = result.probes();
  }
  return r;
}

ReuseReport ideal_report(std::string scene, std::span<const VertexIndex> indices,
                         std::size_t vertex_count) {
  ReuseReport r;
  r.scene = std::move(scene);
  r.strategy = "ideal";
  r.indices = indices.size();
  r.unique_vertices = count_unique(indices);
  r.invocations = r.unique_vertices;
  r.batches = 1;
  r.reuse_rate = reuse_of(r.invocations, r.indices);
  if (vertex_count > 0) {
    r.per_vertex.counts.assign(vertex_count, 0);
    for (const VertexIndex id : indices) {
      if (id >= vertex_count) throw ConfigError("index outside vertex buffer");
      r.per_vertex.counts[id] = 1;
    }
  }
  return r;
}

ReuseReport cache_report(std::string scene, std::string label, const CacheReport& cache,
                         std::span<const VertexIndex> indices) {
  if (cache.total() != indices.size()) {
    throw InvariantError("cache report does not cover the index buffer");
  }
  ReuseReport r;
  r.scene = std::move(scene);
  r.strategy = std::move(label);
  r.indices = cache.total();
  r.invocations = cache.misses;
  r.unique_vertices = count_unique(indices);
  r.reuse_rate = cache.hit_rate();
  return r;
}

std::string cache_label(const CacheConfig& cfg) {
  if (cfg.entries_override != 0) return "cache_" + std::to_string(cfg.entries_override) + "e";
  if (cfg.cache_bytes % 1024 == 0) return "cache_" + std::to_string(cfg.cache_bytes / 1024) + "KB";
  return "cache_" + std::to_string(cfg.cache_bytes) + "B";
}

CostEstimate estimate_cost(const ReuseReport& report, std::uint64_t cycles_per_invocation) {
  CostEstimate c{cycles_per_invocation, 0};
  if (__builtin_mul_overflow(report.invocations, cycles_per_invocation, &c.total_shader_cycles)) {
    throw ConfigError("shader cycle total overflows 64 bits");
  }
  return c;
}

ComparisonTable compare_table(std::span<const ReuseReport> reports) {
  ComparisonTable t;
  for (const auto& r : reports) {
    if (std::find(t.scenes.begin(), t.scenes.end(), r.scene) == t.scenes.end()) {
      t.scenes.push_back(r.scene);
    }
    if (std::find(t.columns.begin(), t.columns.end(), r.strategy) == t.columns.end()) {
      t.columns.push_back(r.strategy);
    }
  }
  std::stable_sort(t.columns.begin(), t.columns.end(),
                   [](const auto& a, const auto& b) { return column_key(a) < column_key(b); });
  t.cells.assign(t.scenes.size(), std::vector<std::optional<double>>(t.columns.size()));
  for (const auto& r : reports) {
    const auto s = std::find(t.scenes.begin(), t.scenes.end(), r.scene) - t.scenes.begin();
    const auto c = std::find(t.columns.begin(), t.columns.end(), r.strategy) - t.columns.begin();
    t.cells[s][c] = r.reuse_rate;
  }
  return t;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (const char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream out;
  out << "scene";
  for (const auto& c : columns) out << ',' << csv_field(c);
  out << "\r\n";
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    out << csv_field(scenes[s]);
    for (const auto& cell : cells[s]) {
      out << ',';
      if (cell) out << format_rate(*cell);
    }
    out << "\r\n";
  }
  return out.str();
}

std::string ComparisonTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    nlohmann::json rates = nlohmann::json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      rates[columns[c]] = cells[s][c] ? nlohmann::json(*cells[s][c]) : nlohmann::json(nullptr);
    }
    rows.push_back({{"scene", scenes[s]}, {"reuse", rates}});
  }
  return nlohmann::json{{"columns", columns}, {"rows", rows}}.dump(2);
}

std::string reports_to_csv(std::span<const ReuseReport> reports) {
  std::ostringstream out;
  out << "scene,strategy,indices,invocations,unique_vertices,batches,reuse_rate,"
         "total_probes,max_chain,slow_insertions\r\n";
  for (const auto& r : reports) {
    out << csv_field(r.scene) << ',' << csv_field(r.strategy) << ',' << r.indices << ','
        << r.invocations << ',' << r.unique_vertices << ',' << r.batches << ','
        << format_rate(r.reuse_rate) << ',';
    if (r.probe_stats) {
      out << r.probe_stats->total_probes << ',' << r.probe_stats->max_chain << ','
          << r.probe_stats->slow_insertions;
    } else {
      out << ",,";
    }
    out << "\r\n";
  }
  return out.str();
}

std::string reports_to_json(std::span<const ReuseReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j = {{"scene", r.scene},
                        {"strategy", r.strategy},
                        {"indices", r.indices},
                        {"invocations", r.invocations},
                        {"unique_vertices", r.unique_vertices},
                        {"batches", r.batches},
                        {"reuse_rate", r.reuse_rate}};
    if (r.probe_stats) j["probe_stats"] = probe_json(*r.probe_stats);
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace vrlab
