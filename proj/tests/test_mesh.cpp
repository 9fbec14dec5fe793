#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "vrlab/error.hpp"
#include "vrlab/mesh.hpp"

using namespace vrlab;

namespace {

IndexedMesh parse(const std::string& text) {
  std::istringstream in(text);
  return parse_obj(in);
}

std::map<std::pair<VertexIndex, VertexIndex>, int> edge_uses(const IndexedMesh& m) {
  std::map<std::pair<VertexIndex, VertexIndex>, int> edges;
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const auto tri = m.triangle(t);
    for (int k = 0; k < 3; ++k) {
      auto a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edges[{a, b}];
    }
  }
  return edges;
}

}  // namespace

TEST(Obj, MinimalTriangle) {
  const auto m = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  EXPECT_EQ(m.vertex_count(), 3u);
  EXPECT_EQ(m.indices, (std::vector<VertexIndex>{0, 1, 2}));
}

TEST(Obj, QuadIsFanTriangulated) {
  const auto m = parse("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  EXPECT_EQ(m.indices, (std::vector<VertexIndex>{0, 1, 2, 0, 2, 3}));
}

TEST(Obj, OutOfRangeReferenceReportsLine) {
  try {
    parse("v 0 0 0\nv 1 0 0\nv 0 1 0\n# comment\nf 1 2 9\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(Obj, DegenerateFaceRejected) {
  EXPECT_THROW(parse("v 0 0 0\nv 1 0 0\nf 1 2\n"), ParseError);
}

TEST(Obj, MalformedTokensRejected) {
  EXPECT_THROW(parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 x 3\n"), ParseError);
  EXPECT_THROW(parse("v 0 0\n"), ParseError);
  EXPECT_THROW(parse("v 0 0 0\nf 0 1 1\n"), ParseError);
}

TEST(Obj, NegativeIndicesAndSlashForms) {
  const auto m = parse(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\ng grp\nusemtl m\n"
      "f -3/1/1 -2/1/1 -1/1/1\nf 1//1 2//1 3//1\n");
  EXPECT_EQ(m.indices, (std::vector<VertexIndex>{0, 1, 2, 0, 1, 2}));
}

TEST(Obj, RoundTrip) {
  const auto src = gen_icosphere(2);
  std::stringstream buf;
  write_obj(src, buf);
  const auto back = parse_obj(buf);
  EXPECT_EQ(back.indices, src.indices);
  EXPECT_EQ(back.positions, src.positions);
}

TEST(Obj, MissingFileIsIoError) {
  EXPECT_THROW(load_obj("/nonexistent/dir/mesh.obj"), IoError);
}

TEST(Icosphere, BaseCounts) {
  const auto m = gen_icosphere(0);
  EXPECT_EQ(m.vertex_count(), 12u);
  EXPECT_EQ(m.triangle_count(), 20u);
  EXPECT_EQ(m.indices.size(), 60u);
  const auto edges = edge_uses(m);
  EXPECT_EQ(static_cast<long>(m.vertex_count()) - static_cast<long>(edges.size()) +
                static_cast<long>(m.triangle_count()),
            2);
}

TEST(Icosphere, CountsFollowRecurrence) {
  for (unsigned s = 0; s <= 5; ++s) {
    const auto m = gen_icosphere(s);
    const std::size_t p = std::size_t{1} << (2 * s);
    EXPECT_EQ(m.vertex_count(), 10 * p + 2) << s;
    EXPECT_EQ(m.triangle_count(), 20 * p) << s;
    EXPECT_EQ(count_unique(m.indices), m.vertex_count()) << s;
  }
  const auto m4 = gen_icosphere(4);
  EXPECT_EQ(m4.vertex_count(), 2562u);
  EXPECT_EQ(m4.indices.size(), 15360u);
}

TEST(Icosphere, ClosedManifold) {
  for (unsigned s = 0; s <= 3; ++s) {
    for (const auto& [edge, uses] : edge_uses(gen_icosphere(s))) {
      ASSERT_EQ(uses, 2) << "s=" << s << " edge " << edge.first << "-" << edge.second;
    }
  }
}

TEST(Icosphere, SizeGuard) { EXPECT_THROW(gen_icosphere(9), ConfigError); }

TEST(Grid, Counts) {
  const auto a = gen_grid(2, 2);
  EXPECT_EQ(a.vertex_count(), 4u);
  EXPECT_EQ(a.triangle_count(), 2u);
  EXPECT_EQ(a.indices.size(), 6u);
  EXPECT_EQ(count_unique(a.indices), 4u);
  const auto b = gen_grid(3, 3);
  EXPECT_EQ(b.vertex_count(), 9u);
  EXPECT_EQ(b.triangle_count(), 8u);
  EXPECT_EQ(b.indices.size(), 24u);
  EXPECT_THROW(gen_grid(1, 5), ConfigError);
}

TEST(Grid, ReferenceCounts2x3) {
  const auto m = gen_grid(2, 3);
  std::map<VertexIndex, int> refs;
  for (const auto id : m.indices) ++refs[id];
  int max_refs = 0;
  int shared = 0;
  for (const auto& [id, n] : refs) {
    max_refs = std::max(max_refs, n);
    shared += n > 1;
  }
  EXPECT_EQ(max_refs, 3);
  EXPECT_GE(shared, 2);
}

TEST(Generators, RandomParametersSatisfyInvariants) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 60; ++i) {
    const auto m = oracle::random_mesh(rng);
    EXPECT_NO_THROW(validate(m));
    EXPECT_EQ(m.indices.size() % 3, 0u);
    for (const auto id : m.indices) ASSERT_LT(id, m.vertex_count());
  }
}

TEST(Shuffle, PermutesTrianglesKeepingCorners) {
  const auto src = gen_grid(6, 7);
  const auto out = shuffle_triangles(src, 99);
  EXPECT_EQ(out.positions, src.positions);
  std::multiset<std::array<VertexIndex, 3>> a, b;
  for (std::size_t t = 0; t < src.triangle_count(); ++t) a.insert(src.triangle(t));
  for (std::size_t t = 0; t < out.triangle_count(); ++t) b.insert(out.triangle(t));
  EXPECT_EQ(a, b);
  EXPECT_NE(out.indices, src.indices);
  EXPECT_EQ(shuffle_triangles(src, 99).indices, out.indices);
}

TEST(Validate, RejectsBrokenMeshes) {
  IndexedMesh m;
  m.indices = {0, 1, 2};
  EXPECT_THROW(validate(m), ConfigError);
  m.positions.resize(2);
  EXPECT_THROW(validate(m), ConfigError);
  m.positions.resize(3);
  EXPECT_NO_THROW(validate(m));
  m.indices.push_back(0);
  EXPECT_THROW(validate(m), ConfigError);
}

TEST(Heatmap, Ramp) {
  EXPECT_EQ(heatmap_color(1), (Rgb{0, 255, 0}));
  EXPECT_EQ(heatmap_color(6), (Rgb{255, 0, 0}));
  EXPECT_EQ(heatmap_color(40), (Rgb{255, 0, 0}));
  EXPECT_EQ(heatmap_color(0), (Rgb{128, 128, 128}));
  for (std::uint32_t c = 1; c < 6; ++c) {
    EXPECT_LT(heatmap_color(c).r, heatmap_color(c + 1).r);
    EXPECT_GT(heatmap_color(c).g, heatmap_color(c + 1).g);
  }
}

TEST(Heatmap, PlyLayout) {
  const auto m = gen_grid(2, 2);
  VertexShadingCounts counts{{1, 2, 0, 6}};
  std::stringstream out;
  write_heatmap_ply(m, counts, out);
  const std::string text = out.str();
  EXPECT_NE(text.find("element vertex 4"), std::string::npos);
  EXPECT_NE(text.find("property uchar red"), std::string::npos);
  EXPECT_NE(text.find("element face 2"), std::string::npos);
  EXPECT_NE(text.find(" 0 255 0\n"), std::string::npos);
  EXPECT_NE(text.find(" 128 128 128\n"), std::string::npos);
  const auto t0 = m.triangle(0);
  const std::string face0 = "3 " + std::to_string(t0[0]) + " " + std::to_string(t0[1]) + " " +
                            std::to_string(t0[2]) + "\n";
  EXPECT_NE(text.find(face0), std::string::npos);
  EXPECT_THROW(write_heatmap_ply(m, VertexShadingCounts{{1}}, out), ConfigError);
}
