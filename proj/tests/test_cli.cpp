#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "cli.hpp"
#include "vrlab/batching.hpp"
#include "vrlab/mesh.hpp"
#include "vrlab/reorder.hpp"

using namespace vrlab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vrlab_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_F(CliTest, IdealOnIcosphere) {
  const auto r = run({"analyze", "--gen", "icosphere:4", "--strategy", "ideal", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["reports"][0]["reuse_rate"].get<double>(), 0.8332, 0.0005);
  EXPECT_EQ(j["config"]["vertices"], "2562");
}

TEST_F(CliTest, NaiveHasNoReuse) {
  const auto r = run({"analyze", "--gen", "icosphere:4", "--strategy", "naive", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(r.out)["reports"][0]["reuse_rate"].get<double>(), 0.0);
}

TEST_F(CliTest, SortOnObjMatchesSetOracle) {
  const auto mesh = shuffle_triangles(gen_grid(30, 30), 4);
  save_obj(mesh, path("m.obj"));
  const auto r = run({"analyze", path("m.obj"), "--strategy", "sort", "--max-unique", "256",
                      "--max-indices", "1023", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::uint64_t expect = 0;
  for (const auto& b : dynamic_batches(mesh.indices, BatchConfig{})) {
    expect += count_unique(std::span(mesh.indices).subspan(b.begin, b.size()));
  }
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["reports"][0]["invocations"].get<std::uint64_t>(), expect);
  EXPECT_EQ(j["reports"][0]["scene"], "m");
}

TEST_F(CliTest, HeaderEchoesDefaults) {
  const auto r = run({"analyze", "--gen", "grid:8x9", "--strategy", "warp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto header = r.out.substr(0, r.out.find('\n'));
  for (const char* key : {"batch_size=96", "max_unique=256", "max_indices=1023", "lanes=32",
                          "table_size=256", "multiplier=2654435769", "fast_probes=4",
                          "processors=28", "wave=1024", "cache_kb=16,32,64", "entry_bytes=64",
                          "scene=grid_8x9", "triangles=112"}) {
    EXPECT_NE(header.find(key), std::string::npos) << key;
  }
}

TEST_F(CliTest, ArtifactsWritten) {
  const auto r = run({"analyze", "--gen", "icosphere:2", "--strategy", "all", "--csv",
                      path("r.csv"), "--table", path("t.csv"), "--json-out", path("r.json"),
                      "--heatmap", path("h.ply"), "--stream", path("s.bin"), "--cycles", "256"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("shader_cycles"), std::string::npos);
  EXPECT_TRUE(slurp(path("t.csv")).starts_with(
      "scene,ideal,cache_16KB,cache_32KB,cache_64KB,naive,warp,sort,hash,phash\r\n"));
  EXPECT_EQ(nlohmann::json::parse(slurp(path("r.json"))).size(), 9u);
  EXPECT_EQ(slurp(path("h.ply")).substr(0, 3), "ply");
  EXPECT_EQ(slurp(path("s.bin")).size(), 320u * 3 * 20);
}

TEST_F(CliTest, OutputIndependentOfThreads) {
  const auto a = run({"analyze", "--gen", "icosphere:4", "--shuffle", "2", "--threads", "1",
                      "--json"});
  const auto b = run({"analyze", "--gen", "icosphere:4", "--shuffle", "2", "--threads", "8",
                      "--json"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, StrategySpecificOptionsRejected) {
  EXPECT_EQ(run({"analyze", "--gen", "icosphere:1", "--strategy", "warp", "--table-size", "512"}).code, 2);
  EXPECT_EQ(run({"analyze", "--gen", "icosphere:1", "--strategy", "sort", "--batch-size", "48"}).code, 2);
  EXPECT_EQ(run({"analyze", "--gen", "icosphere:1", "--strategy", "hash", "--fast-probes", "2"}).code, 2);
  EXPECT_EQ(run({"analyze", "--gen", "icosphere:1", "--strategy", "sort", "--wave", "2"}).code, 2);
  EXPECT_EQ(run({"analyze", "--gen", "icosphere:1", "--strategy", "phash", "--fast-probes", "2"}).code, 0);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"analyze"}).code, 2);
  EXPECT_EQ(run({"analyze", "--gen", "cube:3"}).code, 2);
  EXPECT_EQ(run({"analyze", "--gen", "icosphere:1", "--strategy", "fastest"}).code, 2);
  EXPECT_EQ(run({"analyze", "--gen", "icosphere:1", "--lanes", "24", "--strategy", "warp"}).code, 2);
  EXPECT_EQ(run({"analyze", "--gen", "icosphere:1", "--batch-size", "abc"}).code, 2);
  EXPECT_EQ(run({"analyze", "x.obj", "--gen", "icosphere:1"}).code, 2);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("analyze"), std::string::npos);
}

TEST_F(CliTest, InputErrorsExitOne) {
  const auto missing = run({"analyze", path("missing.obj")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("missing.obj"), std::string::npos);
  std::ofstream(path("bad.obj")) << "v 0 0 0\nf 1 2 3\n";
  const auto bad = run({"analyze", path("bad.obj")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run({"reorder", path("missing.obj"), "-o", path("o.obj")}).code, 1);
}

TEST_F(CliTest, ReorderSingleTriangle) {
  std::ofstream(path("t.obj")) << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";
  const auto r = run({"reorder", path("t.obj"), "-o", path("o.obj")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_obj(path("o.obj")).indices, (std::vector<VertexIndex>{0, 1, 2}));
}

TEST_F(CliTest, ReorderShuffledGridLowersAcmr) {
  const auto r = run({"reorder", "--gen", "grid:20x20", "--shuffle", "3", "-o", path("o.obj"),
                      "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LT(j["acmr_after"].get<double>(), j["acmr_before"].get<double>());
  const auto written = load_obj(path("o.obj"));
  EXPECT_DOUBLE_EQ(acmr(written.indices, 32), j["acmr_after"].get<double>());
}

TEST_F(CliTest, CacheSerialControlEqualsIdeal) {
  const auto r = run({"cache", "--gen", "icosphere:3", "--processors", "1", "--wave", "1",
                      "--entries", "1000000", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["caches"][0]["hit_rate"].get<double>(), j["ideal"].get<double>());
}

TEST_F(CliTest, CacheDefaultsCollapse) {
  const auto r = run({"cache", "--gen", "icosphere:5", "--reorder", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["caches"].size(), 3u);
  for (const auto& c : j["caches"]) EXPECT_LT(c["fraction_of_ideal"].get<double>(), 0.2);
}

TEST_F(CliTest, WalkTrajectoriesAgree) {
  const auto r = run({"walk", "--agents", "1000", "--grid", "64", "--steps", "4", "--strategy",
                      "all", "--check", "--json", "--dump", path("w.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["runs"].size(), 5u);
  for (const auto& run : j["runs"]) EXPECT_TRUE(run["matches_per_agent"].get<bool>());
  const auto csv = slurp(path("w.csv"));
  EXPECT_EQ(csv.substr(0, 16), "step,agent,x,y\r\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 5 * 1000);
}

TEST_F(CliTest, WalkUsageErrors) {
  EXPECT_EQ(run({"walk", "--grid", "0"}).code, 2);
  EXPECT_EQ(run({"walk", "--placement", "corner"}).code, 2);
  EXPECT_EQ(run({"walk", "--strategy", "cache"}).code, 2);
  EXPECT_EQ(run({"walk", "--kept", "0"}).code, 2);
}

TEST_F(CliTest, ExportHeatmap) {
  const auto r = run({"export", "--gen", "icosphere:1", "--strategy", "warp", "-o", path("h.ply")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ply = slurp(path("h.ply"));
  EXPECT_NE(ply.find("element vertex 42"), std::string::npos);
  EXPECT_EQ(run({"export", "--gen", "icosphere:1", "--strategy", "ideal", "-o", path("x.ply")}).code, 2);
}
