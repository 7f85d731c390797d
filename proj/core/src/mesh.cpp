#include "ricci/mesh.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "ricci/error.hpp"

namespace ricci {

namespace {

// Smallest of l_a + l_b - l_c over the three orderings, accurate for sliver triangles.
double triangle_slack(double a, double b, double c) {
  std::array<double, 3> l{a, b, c};
  std::sort(l.begin(), l.end());
  return l[0] - (l[2] - l[1]);
}

struct SideRef {
  Index face;
  std::uint8_t side;
};

}  // namespace

MeshValidationReport validate(std::size_t vertex_count, std::span<const Face> faces,
                              std::span<const std::array<Index, 2>> edge_vertices,
                              std::span<const double> edge_lengths) {
  MeshValidationReport report;
  report.manifold_ok = true;
  report.orientation_ok = true;
  report.worst_triangle_slack = std::numeric_limits<double>::infinity();

  const std::size_t n_edges = edge_vertices.size();
  std::vector<std::vector<SideRef>> uses(n_edges);
  std::vector<int> aligned_count(n_edges, 0);
  std::vector<std::size_t> corner_count(vertex_count, 0);

  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (face.vertices[k] >= vertex_count || face.edges[k] >= n_edges) {
        report.manifold_ok = false;
        report.orientation_ok = false;
        report.triangle_inequality_ok = false;
        return report;
      }
      ++corner_count[face.vertices[k]];
    }
    for (int k = 0; k < 3; ++k) {
      const Index e = face.edges[k];
      uses[e].push_back({static_cast<Index>(f), static_cast<std::uint8_t>(k)});
      const Index from = face.vertices[(k + 1) % 3];
      const Index to = face.vertices[(k + 2) % 3];
      const auto& ev = edge_vertices[e];
      if (face.aligned[k]) {
        ++aligned_count[e];
        if (ev[0] != from || ev[1] != to) report.orientation_ok = false;
      } else if (ev[0] != to || ev[1] != from) {
        report.orientation_ok = false;
      }
    }
    const double slack = triangle_slack(edge_lengths[face.edges[0]], edge_lengths[face.edges[1]],
                                        edge_lengths[face.edges[2]]);
    if (slack < report.worst_triangle_slack) {
      report.worst_triangle_slack = slack;
      report.worst_face = f;
    }
  }

  for (std::size_t e = 0; e < n_edges; ++e) {
    if (uses[e].size() != 2) report.manifold_ok = false;
    if (aligned_count[e] != 1) report.orientation_ok = false;
    if (!(edge_lengths[e] > 0.0)) report.worst_triangle_slack = std::min(report.worst_triangle_slack, 0.0);
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (corner_count[v] == 0) report.manifold_ok = false;
  }

  // Each vertex link must be a single cycle of corners.
  if (report.manifold_ok && report.orientation_ok) {
    std::vector<std::vector<char>> visited(faces.size(), std::vector<char>(3, 0));
    std::vector<int> cycles(vertex_count, 0);
    for (std::size_t f = 0; f < faces.size() && report.manifold_ok; ++f) {
      for (int k = 0; k < 3; ++k) {
        if (visited[f][k]) continue;
        const Index v = faces[f].vertices[k];
        if (++cycles[v] > 1) {
          report.manifold_ok = false;
          break;
        }
        std::size_t cf = f;
        int ck = k;
        while (!visited[cf][ck]) {
          visited[cf][ck] = 1;
          // Outgoing side from this corner is side (ck + 2) % 3.
          const int side = (ck + 2) % 3;
          const Index e = faces[cf].edges[side];
          const SideRef other = uses[e][0].face == cf && uses[e][0].side == side ? uses[e][1] : uses[e][0];
          cf = other.face;
          ck = (other.side + 2) % 3;
        }
      }
    }
  }

  report.triangle_inequality_ok = report.worst_triangle_slack > 0.0;
  if (faces.empty()) report.worst_triangle_slack = 0.0;
  report.euler_characteristic = static_cast<int>(vertex_count) - static_cast<int>(n_edges) +
                                static_cast<int>(faces.size());
  return report;
}

IntrinsicMesh IntrinsicMesh::from_triangles(std::size_t vertex_count,
                                            std::span<const std::array<Index, 3>> triangles,
                                            std::span<const std::array<double, 3>> side_lengths) {
  if (triangles.size() != side_lengths.size()) {
    throw MeshError("side length table does not match face count");
  }
  std::map<std::pair<Index, Index>, Index> edge_of;
  std::vector<std::array<Index, 2>> edge_vertices;
  std::vector<double> edge_lengths;
  std::vector<int> use_count;
  std::vector<Face> faces(triangles.size());

  for (std::size_t f = 0; f < triangles.size(); ++f) {
    const auto& tri = triangles[f];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] >= vertex_count) {
        throw MeshError("face " + std::to_string(f) + " references vertex out of range", f);
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw DegenerateTriangle("face " + std::to_string(f) + " repeats a vertex", f);
    }
    faces[f].vertices = tri;
    for (int k = 0; k < 3; ++k) {
      const Index from = tri[(k + 1) % 3];
      const Index to = tri[(k + 2) % 3];
      const auto key = std::minmax(from, to);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        const auto e = static_cast<Index>(edge_vertices.size());
        edge_of.emplace(key, e);
        edge_vertices.push_back({from, to});
        edge_lengths.push_back(side_lengths[f][k]);
        use_count.push_back(1);
        faces[f].edges[k] = e;
        faces[f].aligned[k] = true;
      } else {
        const Index e = it->second;
        if (++use_count[e] > 2) {
          throw MeshError("non-manifold edge (" + std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ") at face " + std::to_string(f),
                          f);
        }
        faces[f].edges[k] = e;
        faces[f].aligned[k] = edge_vertices[e][0] == from;
      }
    }
  }
  for (std::size_t e = 0; e < use_count.size(); ++e) {
    if (use_count[e] != 2) {
      throw MeshError("boundary edge (" + std::to_string(edge_vertices[e][0]) + ", " +
                      std::to_string(edge_vertices[e][1]) + "); surface is not closed");
    }
  }
  return from_gluing(vertex_count, std::move(faces), std::move(edge_vertices), std::move(edge_lengths));
}

IntrinsicMesh IntrinsicMesh::from_gluing(std::size_t vertex_count, std::vector<Face> faces,
                                         std::vector<std::array<Index, 2>> edge_vertices,
                                         std::vector<double> edge_lengths) {
  if (edge_vertices.size() != edge_lengths.size()) {
    throw MeshError("edge length table does not match edge count");
  }
  IntrinsicMesh mesh;
  mesh.vertex_count_ = vertex_count;
  mesh.faces_ = std::move(faces);
  mesh.edges_.resize(edge_vertices.size());
  for (std::size_t e = 0; e < edge_vertices.size(); ++e) {
    mesh.edges_[e].vertices = edge_vertices[e];
    mesh.edges_[e].length = edge_lengths[e];
  }
  mesh.report_ = validate(vertex_count, mesh.faces_, edge_vertices, edge_lengths);
  const auto& rep = mesh.report_;
  if (!rep.manifold_ok) throw MeshError("surface is not a closed 2-manifold");
  if (!rep.orientation_ok) throw MeshError("inconsistent face orientation");
  if (!rep.triangle_inequality_ok) {
    throw DegenerateTriangle("face " + std::to_string(rep.worst_face) +
                                 " violates the strict triangle inequality",
                             rep.worst_face);
  }
  mesh.finalize();
  return mesh;
}

void IntrinsicMesh::finalize() {
  vertex_faces_.assign(vertex_count_, {});
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      vertex_faces_[faces_[f].vertices[k]].push_back(static_cast<Index>(f));
      const Index e = faces_[f].edges[k];
      const int slot = faces_[f].aligned[k] ? 0 : 1;
      edges_[e].faces[slot] = static_cast<Index>(f);
      edges_[e].sides[slot] = static_cast<std::uint8_t>(k);
    }
  }
  euler_characteristic_ = report_.euler_characteristic;
}

bool IntrinsicMesh::is_simplicial() const {
  std::set<std::pair<Index, Index>> seen;
  for (const Edge& e : edges_) {
    if (e.vertices[0] == e.vertices[1]) return false;
    if (!seen.insert(std::minmax(e.vertices[0], e.vertices[1])).second) return false;
  }
  std::set<std::array<Index, 3>> tris;
  for (const Face& f : faces_) {
    auto key = f.vertices;
    std::sort(key.begin(), key.end());
    if (!tris.insert(key).second) return false;
  }
  return true;
}

IntrinsicMesh IntrinsicMesh::with_lengths(std::vector<double> lengths) const {
  std::vector<std::array<Index, 2>> ev(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) ev[e] = edges_[e].vertices;
  return from_gluing(vertex_count_, faces_, std::move(ev), std::move(lengths));
}

std::vector<double> IntrinsicMesh::reference_lengths() const {
  std::vector<double> out(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) out[e] = edges_[e].length;
  return out;
}

}  // namespace ricci
