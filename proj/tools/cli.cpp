#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vrlab/analytics.hpp"
#include "vrlab/cache_sim.hpp"
#include "vrlab/error.hpp"
#include "vrlab/mesh.hpp"
#include "vrlab/pipeline.hpp"
#include "vrlab/random_walk.hpp"
#include "vrlab/reorder.hpp"

namespace vrlab::cli {
namespace {

// Bad command-line usage that CLI11 cannot catch on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Header = std::vector<std::pair<std::string, std::string>>;

void print_header(std::ostream& out, const std::string& command, const Header& kv) {
  out << "# vrlab " << command;
  for (const auto& [k, v] : kv) out << ' ' << k << '=' << v;
  out << '\n';
}

nlohmann::json header_json(const Header& kv) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

template <class T>
std::string join(const std::vector<T>& items, char sep = ',') {
  std::ostringstream s;
  for (std::size_t i = 0; i < items.size(); ++i) s << (i ? std::string(1, sep) : "") << items[i];
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw IoError("failed writing " + path);
}

unsigned parse_unsigned(std::string_view text, const std::string& what) {
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError("invalid " + what + " '" + std::string(text) + "'");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Mesh input shared by analyze, reorder, cache and export.

struct MeshSource {
  std::string input;
  std::string gen;
  std::optional<std::uint64_t> shuffle;
  bool reorder = false;
  std::string scene;
};

void add_mesh_source(CLI::App* sub, MeshSource& src, bool with_reorder) {
  sub->add_option("input", src.input, "Wavefront OBJ mesh");
  sub->add_option("--gen", src.gen, "Generated mesh: icosphere:S or grid:RxC");
  sub->add_option("--shuffle", src.shuffle, "Shuffle triangle order with this seed");
  sub->add_option("--scene", src.scene, "Scene name used in reports");
  if (with_reorder) {
    sub->add_flag("--reorder", src.reorder, "Apply locality reordering before analysis");
  }
}

IndexedMesh generate(const std::string& desc) {
  const auto colon = desc.find(':');
  const std::string kind = desc.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : desc.substr(colon + 1);
  if (kind == "icosphere") {
    if (arg.empty()) throw UsageError("icosphere needs a subdivision level, e.g. icosphere:4");
    const unsigned s = parse_unsigned(arg, "subdivision level");
    if (s > 8) throw UsageError("icosphere subdivision level must be <= 8");
    return gen_icosphere(s);
  }
  if (kind == "grid") {
    const auto x = arg.find('x');
    const unsigned rows = parse_unsigned(arg.substr(0, x), "grid rows");
    const unsigned cols = x == std::string::npos ? rows : parse_unsigned(arg.substr(x + 1), "grid columns");
    if (rows < 2 || cols < 2) throw UsageError("grid needs at least 2x2 vertices");
    return gen_grid(rows, cols);
  }
  throw UsageError("unknown generator '" + desc + "' (expected icosphere:S or grid:RxC)");
}

IndexedMesh load_source(MeshSource& src) {
  if (src.input.empty() == src.gen.empty()) {
    throw UsageError("give exactly one of an OBJ path or --gen");
  }
  IndexedMesh mesh;
  std::string scene;
  if (!src.gen.empty()) {
    mesh = generate(src.gen);
    scene = src.gen;
    std::replace(scene.begin(), scene.end(), ':', '_');
  } else {
    mesh = load_obj(src.input);
    scene = std::filesystem::path(src.input).stem().string();
  }
  if (src.shuffle) {
    mesh = shuffle_triangles(mesh, *src.shuffle);
    scene += "_shuffled";
  }
  if (src.reorder) {
    mesh = reorder_forsyth(mesh);
    scene += "_reordered";
  }
  if (src.scene.empty()) src.scene = scene;
  return mesh;
}

void echo_source(Header& h, const MeshSource& src, const IndexedMesh& mesh) {
  h.emplace_back("scene", src.scene);
  h.emplace_back("input", src.input.empty() ? "-" : src.input);
  h.emplace_back("gen", src.gen.empty() ? "-" : src.gen);
  h.emplace_back("shuffle", src.shuffle ? std::to_string(*src.shuffle) : "-");
  h.emplace_back("reorder", src.reorder ? "yes" : "no");
  h.emplace_back("vertices", std::to_string(mesh.vertex_count()));
  h.emplace_back("triangles", std::to_string(mesh.triangle_count()));
}

// ---------------------------------------------------------------------------
// Option groups.

struct BatchOptions {
  BatchConfig cfg;
  CLI::Option* batch_size = nullptr;
  CLI::Option* max_unique = nullptr;
  CLI::Option* max_indices = nullptr;
  CLI::Option* lanes = nullptr;
  CLI::Option* block_size = nullptr;

  void add(CLI::App* sub) {
    batch_size = sub->add_option("--batch-size", cfg.static_batch_size, "Indices per static batch");
    max_unique = sub->add_option("--max-unique", cfg.max_unique, "Unique-vertex cap of dynamic batches");
    max_indices = sub->add_option("--max-indices", cfg.max_indices, "Index cap of dynamic batches");
    lanes = sub->add_option("--lanes", cfg.lanes, "Warp width");
    block_size = sub->add_option("--block-size", cfg.block_size, "Threads per block");
  }
  void echo(Header& h) const {
    h.emplace_back("batch_size", std::to_string(cfg.static_batch_size));
    h.emplace_back("max_unique", std::to_string(cfg.max_unique));
    h.emplace_back("max_indices", std::to_string(cfg.max_indices));
    h.emplace_back("lanes", std::to_string(cfg.lanes));
    h.emplace_back("block_size", std::to_string(cfg.block_size));
  }
};

struct HashOptions {
  HashConfig cfg;
  CLI::Option* table_size = nullptr;
  CLI::Option* multiplier = nullptr;
  CLI::Option* fast_probes = nullptr;

  void add(CLI::App* sub) {
    table_size = sub->add_option("--table-size", cfg.table_size, "Hash table slots (power of two)");
    multiplier = sub->add_option("--multiplier", cfg.multiplier, "Odd multiplicative hash constant");
    fast_probes = sub->add_option("--fast-probes", cfg.max_fast_probes, "Per-thread probe budget of phash");
  }
  bool any() const { return table_size->count() + multiplier->count() + fast_probes->count() > 0; }
  void echo(Header& h) const {
    h.emplace_back("table_size", std::to_string(cfg.table_size));
    h.emplace_back("multiplier", std::to_string(cfg.multiplier));
    h.emplace_back("fast_probes", std::to_string(cfg.max_fast_probes));
  }
};

struct CacheOptions {
  std::uint32_t processors = 28;
  std::uint32_t wave = 1024;
  std::vector<std::uint64_t> cache_kb{16, 32, 64};
  std::uint64_t entries = 0;
  std::uint32_t entry_bytes = 64;
  std::vector<CLI::Option*> opts;

  void add(CLI::App* sub) {
    opts.push_back(sub->add_option("--processors", processors, "Simulated multiprocessors"));
    opts.push_back(sub->add_option("--wave", wave, "Concurrent invocations per processor"));
    opts.push_back(sub->add_option("--cache-kb", cache_kb, "Cache sizes in KiB")->delimiter(','));
    opts.push_back(sub->add_option("--entries", entries, "Cache entries (overrides --cache-kb)"));
    opts.push_back(sub->add_option("--entry-bytes", entry_bytes, "Bytes per shaded vertex"));
  }
  bool any() const {
    return std::any_of(opts.begin(), opts.end(), [](auto* o) { return o->count() > 0; });
  }
  std::vector<CacheConfig> configs() const {
    std::vector<CacheConfig> out;
    if (entries != 0) {
      CacheConfig c{processors, wave, 0, entry_bytes, entries};
      c.validate();
      out.push_back(c);
      return out;
    }
    for (const auto kb : cache_kb) {
      CacheConfig c{processors, wave, kb * 1024, entry_bytes, 0};
      c.validate();
      out.push_back(c);
    }
    return out;
  }
  void echo(Header& h) const {
    h.emplace_back("processors", std::to_string(processors));
    h.emplace_back("wave", std::to_string(wave));
    h.emplace_back("cache_kb", join(cache_kb));
    h.emplace_back("entries", entries ? std::to_string(entries) : "-");
    h.emplace_back("entry_bytes", std::to_string(entry_bytes));
  }
};

const std::vector<std::string> kAllStrategies = {"ideal", "cache", "naive", "warp",
                                                 "sort",  "hash",  "phash"};

std::vector<std::string> expand_strategies(const std::vector<std::string>& names,
                                           bool allow_analytic) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& s : kAllStrategies) {
        if (allow_analytic || parse_strategy(s)) out.push_back(s);
      }
    } else if (parse_strategy(n) || (allow_analytic && (n == "ideal" || n == "cache"))) {
      out.push_back(n);
    } else {
      throw UsageError("unknown strategy '" + n + "'");
    }
  }
  std::vector<std::string> unique;
  for (const auto& s : out) {
    if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(s);
  }
  return unique;
}

bool uses(const std::vector<std::string>& strategies, std::initializer_list<const char*> names) {
  return std::any_of(strategies.begin(), strategies.end(), [&](const std::string& s) {
    return std::any_of(names.begin(), names.end(), [&](const char* n) { return s == n; });
  });
}

void reject_unused(CLI::Option* opt, bool used, const std::string& needs) {
  if (opt->count() > 0 && !used) {
    throw UsageError(opt->get_name() + " only applies to " + needs);
  }
}

void check_batch_options(const BatchOptions& b, const std::vector<std::string>& strategies) {
  reject_unused(b.batch_size, uses(strategies, {"naive", "warp"}), "naive/warp");
  reject_unused(b.lanes, uses(strategies, {"warp", "phash"}), "warp/phash");
  for (auto* o : {b.max_unique, b.max_indices, b.block_size}) {
    reject_unused(o, uses(strategies, {"sort", "hash", "phash"}), "sort/hash/phash");
  }
}

void check_hash_options(const HashOptions& h, const std::vector<std::string>& strategies) {
  for (auto* o : {h.table_size, h.multiplier, h.fast_probes}) {
    reject_unused(o, uses(strategies, {"hash", "phash"}), "hash/phash");
  }
  reject_unused(h.fast_probes, uses(strategies, {"phash"}), "phash");
}

void print_reports(std::ostream& out, const std::vector<ReuseReport>& reports,
                   std::optional<std::uint64_t> cycles) {
  out << std::left << std::setw(14) << "strategy" << std::setw(12) << "indices" << std::setw(13)
      << "invocations" << std::setw(10) << "reuse";
  if (cycles) out << std::setw(16) << "shader_cycles";
  out << '\n';
  for (const auto& r : reports) {
    out << std::left << std::setw(14) << r.strategy << std::setw(12) << r.indices
        << std::setw(13) << r.invocations << std::setw(10) << fixed(r.reuse_rate);
    if (cycles) out << std::setw(16) << estimate_cost(r, *cycles).total_shader_cycles;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  MeshSource src;
  std::vector<std::string> strategies{"all"};
  BatchOptions batch;
  HashOptions hash;
  CacheOptions cache;
  std::optional<std::uint64_t> cycles;
  bool json = false;
  std::string csv;
  std::string table;
  std::string json_out;
  std::string heatmap;
  std::string stream;
  unsigned threads = 0;
};

int cmd_analyze(AnalyzeArgs& a, std::ostream& out) {
  const auto strategies = expand_strategies(a.strategies, true);
  check_batch_options(a.batch, strategies);
  check_hash_options(a.hash, strategies);
  if (a.cache.any() && !uses(strategies, {"cache"})) {
    throw UsageError("cache options only apply to the cache strategy");
  }
  const auto cache_cfgs = a.cache.configs();
  a.batch.cfg.validate();
  if (uses(strategies, {"hash", "phash"})) a.hash.cfg.validate(a.batch.cfg);

  IndexedMesh mesh = load_source(a.src);
  const ExecutionOptions exec{a.threads};
  const ShaderFn shader = transform_shader(mesh, a.cycles.value_or(0));

  std::vector<ReuseReport> reports;
  std::optional<StrategyRun> first_run;
  for (const auto& s : strategies) {
    if (s == "ideal") {
      if (mesh.indices.empty()) throw UsageError("ideal reuse of an empty mesh is undefined");
      reports.push_back(ideal_report(a.src.scene, mesh.indices, mesh.vertex_count()));
    } else if (s == "cache") {
      for (const auto& c : cache_cfgs) {
        const auto cr = simulate_parallel_cache(mesh.indices, c, exec);
        reports.push_back(cache_report(a.src.scene, cache_label(c), cr, mesh.indices));
      }
    } else {
      auto run = run_strategy(*parse_strategy(s), mesh, a.batch.cfg, a.hash.cfg, shader, exec,
                              a.src.scene);
      reports.push_back(run.report);
      if (!first_run) first_run = std::move(run);
    }
  }

  Header h;
  echo_source(h, a.src, mesh);
  h.emplace_back("strategies", join(strategies));
  a.batch.echo(h);
  a.hash.echo(h);
  a.cache.echo(h);
  h.emplace_back("cycles", a.cycles ? std::to_string(*a.cycles) : "-");

  const auto table = compare_table(reports);
  if (a.json) {
    nlohmann::json j = {{"command", "analyze"},
                        {"config", header_json(h)},
                        {"reports", nlohmann::json::parse(reports_to_json(reports))},
                        {"table", nlohmann::json::parse(table.to_json())}};
    out << j.dump(2) << '\n';
  } else {
    print_header(out, "analyze", h);
    print_reports(out, reports, a.cycles);
  }
  if (!a.csv.empty()) write_file(a.csv, reports_to_csv(reports));
  if (!a.table.empty()) write_file(a.table, table.to_csv());
  if (!a.json_out.empty()) write_file(a.json_out, reports_to_json(reports) + "\n");
  if (!a.heatmap.empty() || !a.stream.empty()) {
    if (!first_run) throw UsageError("--heatmap/--stream need a naive, warp, sort, hash or phash strategy");
    if (!a.heatmap.empty()) export_heatmap_ply(mesh, first_run->report.per_vertex, a.heatmap);
    if (!a.stream.empty()) {
      std::ofstream f(a.stream, std::ios::binary);
      if (!f) throw IoError("cannot open " + a.stream + " for writing");
      write_triangle_stream(f, first_run->triangles.pending());
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ReorderArgs {
  MeshSource src;
  ReorderParams params;
  std::string output;
  std::uint32_t fifo = 32;
  bool json = false;
};

int cmd_reorder(ReorderArgs& a, std::ostream& out) {
  a.params.validate();
  if (a.fifo == 0) throw UsageError("--fifo must be at least 1");
  const IndexedMesh mesh = load_source(a.src);
  const IndexedMesh reordered = reorder_forsyth(mesh, a.params);
  save_obj(reordered, a.output);
  const double before = acmr(mesh.indices, a.fifo);
  const double after = acmr(reordered.indices, a.fifo);

  Header h;
  echo_source(h, a.src, mesh);
  h.emplace_back("output", a.output);
  h.emplace_back("cache_size", std::to_string(a.params.cache_size));
  h.emplace_back("decay_power", fixed(a.params.decay_power, 3));
  h.emplace_back("last_tri_score", fixed(a.params.last_tri_score, 3));
  h.emplace_back("valence_boost_scale", fixed(a.params.valence_boost_scale, 3));
  h.emplace_back("valence_boost_power", fixed(a.params.valence_boost_power, 3));
  h.emplace_back("fifo", std::to_string(a.fifo));
  if (a.json) {
    out << nlohmann::json{{"command", "reorder"},
                          {"config", header_json(h)},
                          {"acmr_before", before},
                          {"acmr_after", after}}
               .dump(2)
        << '\n';
  } else {
    print_header(out, "reorder", h);
    out << "acmr_before=" << fixed(before) << " acmr_after=" << fixed(after) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct CacheArgs {
  MeshSource src;
  CacheOptions cache;
  bool json = false;
  std::string csv;
  unsigned threads = 0;
};

int cmd_cache(CacheArgs& a, std::ostream& out) {
  const auto cfgs = a.cache.configs();
  const IndexedMesh mesh = load_source(a.src);
  if (mesh.indices.empty()) throw UsageError("cache simulation of an empty mesh");
  const ExecutionOptions exec{a.threads};
  std::vector<ReuseReport> reports{ideal_report(a.src.scene, mesh.indices, 0)};
  for (const auto& c : cfgs) {
    const auto cr = simulate_parallel_cache(mesh.indices, c, exec);
    reports.push_back(cache_report(a.src.scene, cache_label(c), cr, mesh.indices));
  }
  const double ideal = reports.front().reuse_rate;

  Header h;
  echo_source(h, a.src, mesh);
  a.cache.echo(h);
  if (a.json) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 1; i < reports.size(); ++i) {
      rows.push_back({{"config", reports[i].strategy},
                      {"hits", reports[i].indices - reports[i].invocations},
                      {"misses", reports[i].invocations},
                      {"hit_rate", reports[i].reuse_rate},
                      {"fraction_of_ideal", ideal > 0 ? reports[i].reuse_rate / ideal : 0.0}});
    }
    out << nlohmann::json{{"command", "cache"},
                          {"config", header_json(h)},
                          {"ideal", ideal},
                          {"caches", rows}}
               .dump(2)
        << '\n';
  } else {
    print_header(out, "cache", h);
    out << std::left << std::setw(16) << "config" << std::setw(12) << "hit_rate"
        << "fraction_of_ideal\n";
    for (const auto& r : reports) {
      out << std::left << std::setw(16) << r.strategy << std::setw(12) << fixed(r.reuse_rate)
          << fixed(ideal > 0 ? r.reuse_rate / ideal : 0.0, 4) << '\n';
    }
  }
  if (!a.csv.empty()) write_file(a.csv, compare_table(reports).to_csv());
  return kOk;
}

// ---------------------------------------------------------------------------

struct WalkArgs {
  walk::WalkConfig cfg;
  std::string grid = "256";
  std::vector<std::string> strategies{"sort"};
  std::string placement = "uniform";
  std::string dump;
  bool check = false;
  bool json = false;
  BatchOptions batch;
  HashOptions hash;
  unsigned threads = 0;
};

int cmd_walk(WalkArgs& a, std::ostream& out) {
  const auto x = a.grid.find('x');
  a.cfg.grid_width = parse_unsigned(a.grid.substr(0, x), "grid width");
  a.cfg.grid_height =
      x == std::string::npos ? a.cfg.grid_width : parse_unsigned(a.grid.substr(x + 1), "grid height");
  a.cfg.validate();
  walk::Placement placement;
  if (a.placement == "uniform") {
    placement = walk::Placement::uniform;
  } else if (a.placement == "quadrant") {
    placement = walk::Placement::quadrant;
  } else {
    throw UsageError("--placement must be uniform or quadrant");
  }
  const auto strategies = expand_strategies(a.strategies, false);
  check_batch_options(a.batch, strategies);
  check_hash_options(a.hash, strategies);
  BatchConfig batch = a.batch.cfg;
  batch.primitive_size = 1;
  batch.validate();
  if (uses(strategies, {"hash", "phash"})) a.hash.cfg.validate(batch);

  const auto initial = walk::place_agents(a.cfg, placement);
  const ExecutionOptions exec{a.threads};

  std::optional<walk::WalkResult> reference;
  if (a.check) reference = walk::run_walk(a.cfg, initial, std::nullopt);

  Header h;
  h.emplace_back("grid", std::to_string(a.cfg.grid_width) + "x" + std::to_string(a.cfg.grid_height));
  h.emplace_back("agents", std::to_string(a.cfg.agents));
  h.emplace_back("steps", std::to_string(a.cfg.steps));
  h.emplace_back("seed", std::to_string(a.cfg.rng_seed));
  h.emplace_back("max_distance", std::to_string(a.cfg.max_move_distance));
  h.emplace_back("kept_moves", std::to_string(a.cfg.kept_moves));
  h.emplace_back("placement", a.placement);
  h.emplace_back("strategies", join(strategies));
  a.batch.echo(h);
  a.hash.echo(h);

  nlohmann::json runs = nlohmann::json::array();
  if (!a.json) {
    print_header(out, "walk", h);
    out << std::left << std::setw(8) << "step" << std::setw(10) << "strategy" << std::setw(10)
        << "agents" << std::setw(13) << "invocations" << "reuse\n";
  }
  bool all_match = true;
  for (std::size_t si = 0; si < strategies.size(); ++si) {
    const auto& name = strategies[si];
    const auto result = walk::run_walk(a.cfg, initial, parse_strategy(name), batch, a.hash.cfg, exec);
    const bool match = reference && result.trajectory == reference->trajectory;
    all_match = all_match && (!reference || match);
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t s = 0; s < result.step_reports.size(); ++s) {
      const auto& r = result.step_reports[s];
      if (a.json) {
        steps.push_back({{"step", s}, {"invocations", r.invocations}, {"reuse_rate", r.reuse_rate},
                         {"batches", r.batches}});
      } else {
        out << std::left << std::setw(8) << s << std::setw(10) << name << std::setw(10)
            << r.indices << std::setw(13) << r.invocations << fixed(r.reuse_rate) << '\n';
      }
    }
    nlohmann::json run = {{"strategy", name}, {"steps", steps}};
    if (reference) {
      run["matches_per_agent"] = match;
      if (!a.json) out << "# " << name << " matches_per_agent=" << (match ? "yes" : "no") << '\n';
    }
    runs.push_back(std::move(run));

    if (si == 0 && !a.dump.empty()) {
      std::ostringstream csv;
      csv << "step,agent,x,y\r\n";
      for (std::size_t s = 0; s < result.trajectory.size(); ++s) {
        for (std::size_t ag = 0; ag < result.trajectory[s].size(); ++ag) {
          const auto c = result.trajectory[s][ag];
          csv << s << ',' << ag << ',' << c.x() << ',' << c.y() << "\r\n";
        }
      }
      write_file(a.dump, csv.str());
    }
  }
  if (a.json) {
    out << nlohmann::json{{"command", "walk"}, {"config", header_json(h)}, {"runs", runs}}.dump(2)
        << '\n';
  }
  return all_match ? kOk : kRuntimeError;
}

// ---------------------------------------------------------------------------

struct ExportArgs {
  MeshSource src;
  std::string strategy = "sort";
  std::string output;
  BatchOptions batch;
  HashOptions hash;
  unsigned threads = 0;
};

int cmd_export(ExportArgs& a, std::ostream& out) {
  const auto strategies = expand_strategies({a.strategy}, false);
  if (strategies.size() != 1) throw UsageError("export takes exactly one strategy");
  check_batch_options(a.batch, strategies);
  check_hash_options(a.hash, strategies);
  const IndexedMesh mesh = load_source(a.src);
  const auto run = run_strategy(*parse_strategy(strategies.front()), mesh, a.batch.cfg, a.hash.cfg,
                                transform_shader(mesh), ExecutionOptions{a.threads}, a.src.scene);
  export_heatmap_ply(mesh, run.report.per_vertex, a.output);
  Header h;
  echo_source(h, a.src, mesh);
  h.emplace_back("strategy", strategies.front());
  a.batch.echo(h);
  a.hash.echo(h);
  h.emplace_back("output", a.output);
  print_header(out, "export", h);
  out << "invocations=" << run.report.invocations << " reuse=" << fixed(run.report.reuse_rate)
      << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vertex reuse strategies for parallel geometry processing", "vrlab"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Measure reuse of one or more strategies on a mesh");
  add_mesh_source(an, analyze.src, true);
  an->add_option("--strategy", analyze.strategies,
                 "naive|warp|sort|hash|phash|cache|ideal|all (comma separated)")
      ->delimiter(',');
  analyze.batch.add(an);
  analyze.hash.add(an);
  analyze.cache.add(an);
  an->add_option("--cycles", analyze.cycles, "Abstract shader cost per invocation");
  an->add_flag("--json", analyze.json, "JSON on standard output");
  an->add_option("--csv", analyze.csv, "Write per-strategy rows as CSV");
  an->add_option("--table", analyze.table, "Write the scene x strategy table as CSV");
  an->add_option("--json-out", analyze.json_out, "Write per-strategy rows as JSON");
  an->add_option("--heatmap", analyze.heatmap, "Write a shading-count PLY for the first strategy");
  an->add_option("--stream", analyze.stream, "Write the first strategy's triangle stream");
  an->add_option("--threads", analyze.threads, "Worker threads (0 = all cores)");

  ReorderArgs reorder;
  auto* re = app.add_subcommand("reorder", "Reorder triangles for vertex locality");
  add_mesh_source(re, reorder.src, false);
  re->add_option("-o,--output", reorder.output, "Output OBJ")->required();
  re->add_option("--cache-size", reorder.params.cache_size, "Modeled cache length");
  re->add_option("--decay-power", reorder.params.decay_power);
  re->add_option("--last-tri-score", reorder.params.last_tri_score);
  re->add_option("--valence-scale", reorder.params.valence_boost_scale);
  re->add_option("--valence-power", reorder.params.valence_boost_power);
  re->add_option("--fifo", reorder.fifo, "FIFO size for the ACMR report");
  re->add_flag("--json", reorder.json, "JSON on standard output");

  CacheArgs cache;
  auto* ca = app.add_subcommand("cache", "Simulate per-multiprocessor post-transform caches");
  add_mesh_source(ca, cache.src, true);
  cache.cache.add(ca);
  ca->add_flag("--json", cache.json, "JSON on standard output");
  ca->add_option("--csv", cache.csv, "Write the result table as CSV");
  ca->add_option("--threads", cache.threads, "Worker threads (0 = all cores)");

  WalkArgs walk_args;
  auto* wa = app.add_subcommand("walk", "Random walk with deduplicated move evaluation");
  wa->add_option("--agents", walk_args.cfg.agents, "Number of agents");
  wa->add_option("--grid", walk_args.grid, "Grid side N or WxH");
  wa->add_option("--steps", walk_args.cfg.steps, "Simulation steps");
  wa->add_option("--seed", walk_args.cfg.rng_seed, "RNG seed");
  wa->add_option("--max-distance", walk_args.cfg.max_move_distance, "Largest move distance");
  wa->add_option("--kept", walk_args.cfg.kept_moves, "Moves kept per cell");
  wa->add_option("--strategy", walk_args.strategies, "naive|warp|sort|hash|phash|all")
      ->delimiter(',');
  wa->add_option("--placement", walk_args.placement, "uniform or quadrant");
  wa->add_option("--dump", walk_args.dump, "Write agent positions of the first strategy as CSV");
  wa->add_flag("--check", walk_args.check, "Compare against per-agent evaluation");
  wa->add_flag("--json", walk_args.json, "JSON on standard output");
  walk_args.batch.add(wa);
  walk_args.hash.add(wa);
  wa->add_option("--threads", walk_args.threads, "Worker threads (0 = all cores)");

  ExportArgs exp;
  auto* ex = app.add_subcommand("export", "Write a per-vertex shading heatmap as PLY");
  add_mesh_source(ex, exp.src, true);
  ex->add_option("--strategy", exp.strategy, "naive|warp|sort|hash|phash");
  ex->add_option("-o,--output", exp.output, "Output PLY")->required();
  exp.batch.add(ex);
  exp.hash.add(ex);
  ex->add_option("--threads", exp.threads, "Worker threads (0 = all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "vrlab: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (an->parsed()) return cmd_analyze(analyze, out);
    if (re->parsed()) return cmd_reorder(reorder, out);
    if (ca->parsed()) return cmd_cache(cache, out);
    if (wa->parsed()) return cmd_walk(walk_args, out);
    if (ex->parsed()) return cmd_export(exp, out);
  } catch (const UsageError& e) {
    err << "vrlab: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "vrlab: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "vrlab: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace vrlab::cli
