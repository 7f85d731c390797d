#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ricci/flow.hpp"
#include "ricci/generator.hpp"
#include "ricci/mesh.hpp"
#include "ricci/mesh_io.hpp"

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(RICCI_FIXTURE_DIR) + "/" + name; }

inline ricci::IntrinsicMesh load_fixture(const std::string& name) { return ricci::load_mesh_file(fixture(name)); }

/// Triangles with every side of length `len` (an intrinsic, not embedded, mesh).
inline ricci::IntrinsicMesh uniform_mesh(std::size_t n, const std::vector<std::array<ricci::Index, 3>>& tris,
                                         double len = 1.0) {
  std::vector<std::array<double, 3>> sides(tris.size(), {len, len, len});
  return ricci::IntrinsicMesh::from_triangles(n, tris, sides);
}

/// Double cone over an n-gon: apex 0, apex 1, rim 2..n+1, all sides 1.
inline ricci::IntrinsicMesh bipyramid(int n) {
  std::vector<std::array<ricci::Index, 3>> tris;
  for (int k = 0; k < n; ++k) {
    const auto a = static_cast<ricci::Index>(2 + k), b = static_cast<ricci::Index>(2 + (k + 1) % n);
    tris.push_back({0, a, b});
    tris.push_back({1, b, a});
  }
  return uniform_mesh(static_cast<std::size_t>(n + 2), tris);
}

/// Unit regular tetrahedron (all sides 1).
inline ricci::IntrinsicMesh unit_tetrahedron() { return uniform_mesh(4, {{{0, 1, 2}}, {{0, 3, 1}}, {{0, 2, 3}}, {{1, 3, 2}}}); }

/// Flow settings that keep unit tests quick on small meshes.
inline ricci::FlowConfig quick_config() {
  ricci::FlowConfig c;
  c.dt_init = 1e-2;
  c.eigen_count = 3;
  return c;
}

}  // namespace testing_support
