#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ricci {

using Index = std::uint32_t;

/// A triangle of an intrinsic mesh. Side k is opposite corner k and runs
/// from corner k+1 to corner k+2 (indices mod 3).
struct Face {
  std::array<Index, 3> vertices{};
  std::array<Index, 3> edges{};
  /// True when side k is traversed in the stored direction of its edge.
  std::array<bool, 3> aligned{};
};

struct Edge {
  std::array<Index, 2> vertices{};
  double length = 0.0;
  /// (face, side) pairs; side 0 is the aligned occurrence, side 1 the reversed one.
  std::array<Index, 2> faces{};
  std::array<std::uint8_t, 2> sides{};
};

struct MeshValidationReport {
  bool manifold_ok = false;
  bool orientation_ok = false;
  bool triangle_inequality_ok = false;
  int euler_characteristic = 0;
  /// min over faces of (l_a + l_b - l_c), taken over the worst ordering.
  double worst_triangle_slack = 0.0;
  std::size_t worst_face = 0;

  bool ok() const { return manifold_ok && orientation_ok && triangle_inequality_ok; }
};

/// Combinatorics plus reference edge lengths of a closed oriented triangulated
/// surface. Multi-edges and self-loops are allowed (a Delta-complex), which is
/// what gluing constructions such as the genus-2 octagon produce.
///
/// Immutable after construction. Both factories validate and throw MeshError /
/// DegenerateTriangle on failure.
class IntrinsicMesh {
 public:
  /// Builds a mesh from a polygon soup; edges are identified by unordered
  /// vertex pair. `side_lengths[f][k]` is the reference length of side k of face f.
  static IntrinsicMesh from_triangles(std::size_t vertex_count,
                                      std::span<const std::array<Index, 3>> triangles,
                                      std::span<const std::array<double, 3>> side_lengths);

  /// Builds a mesh from an explicit gluing: every face names its three edges
  /// and whether each side runs along the edge's stored direction.
  static IntrinsicMesh from_gluing(std::size_t vertex_count, std::vector<Face> faces,
                                   std::vector<std::array<Index, 2>> edge_vertices,
                                   std::vector<double> edge_lengths);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t face_count() const { return faces_.size(); }

  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Face& face(std::size_t f) const { return faces_[f]; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }

  /// Faces incident to each vertex (a face appears once per corner it has there).
  const std::vector<std::vector<Index>>& vertex_faces() const { return vertex_faces_; }

  int euler_characteristic() const { return euler_characteristic_; }
  const MeshValidationReport& validation() const { return report_; }

  /// True when no two edges share an endpoint pair and there are no loops, so
  /// the mesh can be written as a plain polygon soup.
  bool is_simplicial() const;

  /// Copy of this mesh whose reference lengths are the given per-edge lengths.
  IntrinsicMesh with_lengths(std::vector<double> lengths) const;

  std::vector<double> reference_lengths() const;

 private:
  IntrinsicMesh() = default;
  void finalize();

  std::size_t vertex_count_ = 0;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> vertex_faces_;
  int euler_characteristic_ = 0;
  MeshValidationReport report_;
};

/// Checks manifoldness, orientation, and the triangle inequality without throwing.
MeshValidationReport validate(std::size_t vertex_count, std::span<const Face> faces,
                              std::span<const std::array<Index, 2>> edge_vertices,
                              std::span<const double> edge_lengths);

inline int euler_characteristic(const IntrinsicMesh& mesh) { return mesh.euler_characteristic(); }

}  // namespace ricci
