#include "ricci/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "ricci/error.hpp"

namespace ricci {

namespace {

using Point = std::array<double, 3>;

double distance(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

struct Soup {
  std::vector<Point> points;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<std::string> annotations;
};

void fan(const std::vector<long>& polygon, std::size_t vertex_count, Soup& soup, std::size_t record) {
  if (polygon.size() < 3) {
    throw MeshError(fmt::format("face record {} has fewer than three vertices", record));
  }
  for (long idx : polygon) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= vertex_count) {
      throw MeshError(fmt::format("face record {} references vertex {} out of range", record, idx));
    }
  }
  for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
    soup.triangles.push_back({static_cast<Index>(polygon[0]), static_cast<Index>(polygon[k]),
                              static_cast<Index>(polygon[k + 1])});
  }
}

// Returns the next non-empty, non-comment line with comments stripped;
// `#@` annotation lines are collected on the side.
std::optional<std::string> next_record(std::istream& in, Soup& soup) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("#@", 0) == 0) {
      soup.annotations.push_back(line.substr(2));
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return line;
  }
  return std::nullopt;
}

Soup parse_off(std::istream& in) {
  Soup soup;
  auto header = next_record(in, soup);
  if (!header) throw MeshError("empty OFF stream");
  std::istringstream hs(*header);
  std::string keyword;
  hs >> keyword;
  if (keyword.size() < 3 || keyword.substr(keyword.size() - 3) != "OFF") {
    throw MeshError("missing OFF keyword");
  }
  if (keyword != "OFF") throw MeshError("unsupported OFF variant '" + keyword + "'");
  long nv = -1, nf = -1, ne = 0;
  if (!(hs >> nv)) {
    auto counts = next_record(in, soup);
    if (!counts) throw MeshError("missing OFF counts");
    hs = std::istringstream(*counts);
    hs >> nv;
  }
  if (!(hs >> nf)) throw MeshError("missing OFF face count");
  hs >> ne;
  if (nv <= 0 || nf <= 0) throw MeshError("OFF counts must be positive");

  soup.points.resize(static_cast<std::size_t>(nv));
  for (long v = 0; v < nv; ++v) {
    auto rec = next_record(in, soup);
    if (!rec) throw MeshError(fmt::format("OFF truncated at vertex {}", v));
    std::istringstream ls(*rec);
    auto& p = soup.points[static_cast<std::size_t>(v)];
    if (!(ls >> p[0] >> p[1] >> p[2])) throw MeshError(fmt::format("bad OFF vertex record {}", v));
  }
  for (long f = 0; f < nf; ++f) {
    auto rec = next_record(in, soup);
    if (!rec) throw MeshError(fmt::format("OFF truncated at face {}", f));
    std::istringstream ls(*rec);
    long n = 0;
    if (!(ls >> n) || n < 3) throw MeshError(fmt::format("bad OFF face record {}", f));
    std::vector<long> poly(static_cast<std::size_t>(n));
    for (auto& idx : poly) {
      if (!(ls >> idx)) throw MeshError(fmt::format("bad OFF face record {}", f));
    }
    fan(poly, soup.points.size(), soup, static_cast<std::size_t>(f));
  }
  // Trailing annotations.
  while (next_record(in, soup)) {
  }
  return soup;
}

Soup parse_obj(std::istream& in) {
  Soup soup;
  std::string line;
  std::size_t face_record = 0;
  std::vector<std::vector<long>> polygons;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Point p{};
      if (!(ls >> p[0] >> p[1] >> p[2])) throw MeshError("bad OBJ vertex record: " + line);
      soup.points.push_back(p);
    } else if (tag == "f") {
      std::vector<long> poly;
      std::string tok;
      while (ls >> tok) {
        long idx = 0;
        try {
          idx = std::stol(tok.substr(0, tok.find('/')));
        } catch (const std::exception&) {
          throw MeshError(fmt::format("bad OBJ face record {}", face_record));
        }
        if (idx < 0) idx += static_cast<long>(soup.points.size()) + 1;
        poly.push_back(idx - 1);
      }
      polygons.push_back(std::move(poly));
      ++face_record;
    }
  }
  for (std::size_t f = 0; f < polygons.size(); ++f) fan(polygons[f], soup.points.size(), soup, f);
  return soup;
}

IntrinsicMesh from_annotations(const Soup& soup) {
  std::vector<std::array<Index, 2>> ev;
  std::vector<double> lengths;
  std::vector<Face> faces;
  for (const auto& note : soup.annotations) {
    std::istringstream ls(note);
    std::string tag;
    ls >> tag;
    if (tag == "e") {
      std::array<Index, 2> v{};
      double l = 0.0;
      if (!(ls >> v[0] >> v[1] >> l)) throw MeshError("bad intrinsic edge annotation: " + note);
      ev.push_back(v);
      lengths.push_back(l);
    } else if (tag == "f") {
      Face face;
      std::string bits;
      if (!(ls >> face.edges[0] >> face.edges[1] >> face.edges[2] >> bits) || bits.size() != 3) {
        throw MeshError("bad intrinsic face annotation: " + note);
      }
      for (int k = 0; k < 3; ++k) face.aligned[k] = bits[k] == '1';
      faces.push_back(face);
    }
  }
  if (faces.size() != soup.triangles.size()) {
    throw MeshError("intrinsic annotation face count does not match face records");
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    faces[f].vertices = soup.triangles[f];
    for (Index e : faces[f].edges) {
      if (e >= ev.size()) throw MeshError(fmt::format("annotation for face {} names unknown edge", f), f);
    }
  }
  return IntrinsicMesh::from_gluing(soup.points.size(), std::move(faces), std::move(ev), std::move(lengths));
}

IntrinsicMesh from_soup(const Soup& soup) {
  const bool intrinsic = std::any_of(soup.annotations.begin(), soup.annotations.end(), [](const std::string& a) {
    return a.find("intrinsic") != std::string::npos;
  });
  if (intrinsic) return from_annotations(soup);
  std::vector<std::array<double, 3>> sides(soup.triangles.size());
  for (std::size_t f = 0; f < soup.triangles.size(); ++f) {
    const auto& t = soup.triangles[f];
    for (int k = 0; k < 3; ++k) {
      sides[f][k] = distance(soup.points[t[(k + 1) % 3]], soup.points[t[(k + 2) % 3]]);
    }
  }
  return IntrinsicMesh::from_triangles(soup.points.size(), soup.triangles, sides);
}

}  // namespace

IntrinsicMesh load_mesh(std::istream& source, MeshFormat format) {
  const Soup soup = format == MeshFormat::OFF ? parse_off(source) : parse_obj(source);
  return from_soup(soup);
}

MeshFormat format_from_path(std::string_view path) {
  std::string ext;
  if (auto dot = path.rfind('.'); dot != std::string_view::npos) ext = std::string(path.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "off") return MeshFormat::OFF;
  if (ext == "obj") return MeshFormat::OBJ;
  throw MeshError("unrecognized mesh extension in '" + std::string(path) + "'");
}

IntrinsicMesh load_mesh_file(const std::string& path) {
  const MeshFormat format = format_from_path(path);
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  return load_mesh(in, format);
}

void write_off(const IntrinsicMesh& mesh, std::ostream& out, const std::vector<std::string>& header_comments) {
  out << "OFF\n";
  for (const auto& c : header_comments) out << "# " << c << '\n';
  out << mesh.vertex_count() << ' ' << mesh.face_count() << ' ' << mesh.edge_count() << '\n';
  // No embedding exists in general; lengths live in the annotations below.
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) out << "0 0 0\n";
  for (const Face& f : mesh.faces()) {
    out << "3 " << f.vertices[0] << ' ' << f.vertices[1] << ' ' << f.vertices[2] << '\n';
  }
  out << "#@ intrinsic " << mesh.edge_count() << '\n';
  for (const Edge& e : mesh.edges()) {
    out << fmt::format("#@ e {} {} {:.17g}\n", e.vertices[0], e.vertices[1], e.length);
  }
  for (const Face& f : mesh.faces()) {
    out << fmt::format("#@ f {} {} {} {}{}{}\n", f.edges[0], f.edges[1], f.edges[2], f.aligned[0] ? '1' : '0',
                       f.aligned[1] ? '1' : '0', f.aligned[2] ? '1' : '0');
  }
}

}  // namespace ricci
