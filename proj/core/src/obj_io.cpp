#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "vrlab/error.hpp"
#include "vrlab/mesh.hpp"

namespace vrlab {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// "7", "7/2", "7//3", "-1/4/2" -> resolved zero-based index.
VertexIndex parse_face_ref(std::string_view token, std::size_t vertex_count,
                           std::size_t line) {
  const auto slash = token.find('/');
  const std::string_view head = token.substr(0, slash);
  long long ref = 0;
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), ref);
  if (ec != std::errc{} || ptr != head.data() + head.size() || ref == 0) {
    throw ParseError("malformed face reference '" + std::string(token) + "'", line);
  }
  const long long count = static_cast<long long>(vertex_count);
  const long long resolved = ref > 0 ? ref - 1 : count + ref;
  if (resolved < 0 || resolved >= count) {
    throw ParseError("face references vertex " + std::to_string(ref) + " but only " +
                         std::to_string(vertex_count) + " are declared",
                     line);
  }
  if (resolved >= static_cast<long long>(kInvalidIndex)) {
    throw ParseError("vertex index exceeds 32-bit range", line);
  }
  return static_cast<VertexIndex>(resolved);
}

}  // namespace

IndexedMesh parse_obj(std::istream& in) {
  IndexedMesh mesh;
  std::string raw;
  std::size_t line = 0;
  std::vector<VertexIndex> face;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;

    const auto space = text.find_first_of(" \t");
    const std::string_view keyword = text.substr(0, space);
    const std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : text.substr(space + 1);

    if (keyword == "v") {
      std::istringstream fields{std::string(rest)};
      Vec3 p;
      if (!(fields >> p.x >> p.y >> p.z)) {
        throw ParseError("vertex needs three coordinates", line);
      }
      mesh.positions.push_back(p);
    } else if (keyword == "f") {
      face.clear();
      std::istringstream fields{std::string(rest)};
      std::string token;
      while (fields >> token) {
        face.push_back(parse_face_ref(token, mesh.positions.size(), line));
      }
      if (face.size() < 3) {
        throw ParseError("face has fewer than 3 vertices", line);
      }
      for (std::size_t k = 1; k + 1 < face.size(); ++k) {
        mesh.indices.insert(mesh.indices.end(), {face[0], face[k], face[k + 1]});
      }
    }
  }
  validate(mesh);
  return mesh;
}

IndexedMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_obj(in);
}

void write_obj(const IndexedMesh& mesh, std::ostream& out) {
  const auto old_precision = out.precision(std::numeric_limits<float>::max_digits10);
  for (const auto& p : mesh.positions) {
    out << "v " << p.x << ' ' << p.y << ' ' << p.z << '\n';
  }
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto [a, b, c] = mesh.triangle(t);
    out << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << '\n';
  }
  out.precision(old_precision);
}

void save_obj(const IndexedMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_obj(mesh, out);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace vrlab
