#include "ricci/generator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ricci/error.hpp"

namespace ricci {

IntrinsicMesh octagon_genus2() {
  constexpr Index cone = 0;
  constexpr Index center = 1;
  const double spoke = 1.0;
  const double side = 2.0 * std::sin(std::numbers::pi / 8.0);

  // Boundary word a b a^-1 b^-1 c d c^-1 d^-1: boundary side j uses loop edge
  // kLoop[j], aligned when the letter is not inverted.
  constexpr std::array<Index, 8> kLoop{0, 1, 0, 1, 2, 3, 2, 3};
  constexpr std::array<bool, 8> kForward{true, true, false, false, true, true, false, false};

  std::vector<std::array<Index, 2>> ev;
  std::vector<double> lengths;
  for (int j = 0; j < 4; ++j) {
    ev.push_back({cone, cone});
    lengths.push_back(side);
  }
  // Spoke j runs center -> P_j and has edge id 4 + j.
  for (int j = 0; j < 8; ++j) {
    ev.push_back({center, cone});
    lengths.push_back(spoke);
  }

  std::vector<Face> faces(8);
  for (int j = 0; j < 8; ++j) {
    Face& f = faces[j];
    f.vertices = {center, cone, cone};  // (center, P_j, P_{j+1})
    f.edges[0] = kLoop[j];
    f.aligned[0] = kForward[j];
    f.edges[1] = 4 + static_cast<Index>((j + 1) % 8);  // P_{j+1} -> center
    f.aligned[1] = false;
    f.edges[2] = 4 + static_cast<Index>(j);  // center -> P_j
    f.aligned[2] = true;
  }
  return IntrinsicMesh::from_gluing(2, std::move(faces), std::move(ev), std::move(lengths));
}

IntrinsicMesh subdivide(const IntrinsicMesh& mesh) {
  const auto nv = static_cast<Index>(mesh.vertex_count());
  const auto ne = static_cast<Index>(mesh.edge_count());

  std::vector<std::array<Index, 2>> ev;
  std::vector<double> lengths;
  ev.reserve(2 * ne + 3 * mesh.face_count());
  // Edge e splits into 2e (first endpoint -> midpoint) and 2e+1 (midpoint -> second endpoint).
  for (Index e = 0; e < ne; ++e) {
    const Edge& edge = mesh.edge(e);
    const Index mid = nv + e;
    ev.push_back({edge.vertices[0], mid});
    ev.push_back({mid, edge.vertices[1]});
    lengths.push_back(0.5 * edge.length);
    lengths.push_back(0.5 * edge.length);
  }

  std::vector<Face> faces;
  faces.reserve(4 * mesh.face_count());
  for (const Face& f : mesh.faces()) {
    std::array<Index, 3> mid{};
    for (int k = 0; k < 3; ++k) mid[k] = nv + f.edges[k];

    // Half of side k touching its start corner (k+1) and its end corner (k+2).
    auto half_from_start = [&](int k) { return f.aligned[k] ? 2 * f.edges[k] : 2 * f.edges[k] + 1; };
    auto half_to_end = [&](int k) { return f.aligned[k] ? 2 * f.edges[k] + 1 : 2 * f.edges[k]; };

    // Interior edge between the midpoints of sides k+1 and k+2 is parallel to side k.
    std::array<Index, 3> inner{};
    for (int k = 0; k < 3; ++k) {
      inner[k] = static_cast<Index>(ev.size());
      ev.push_back({mid[(k + 1) % 3], mid[(k + 2) % 3]});
      lengths.push_back(0.5 * mesh.edge(f.edges[k]).length);
    }

    // Corner triangle at corner c: (c, mid of side c+2, mid of side c+1).
    for (int c = 0; c < 3; ++c) {
      const int next = (c + 1) % 3;  // side from c to c+1 is side c+2
      const int prev = (c + 2) % 3;  // side from c+2 to c is side c+1
      Face t;
      t.vertices = {f.vertices[c], mid[prev], mid[next]};
      // side 0: mid[prev] -> mid[next]; reversed interior edge `c`.
      t.edges[0] = inner[c];
      t.aligned[0] = false;
      // side 1: mid[next] -> corner c; the half of side `next` ending at c.
      t.edges[1] = half_to_end(next);
      t.aligned[1] = f.aligned[next];
      // side 2: corner c -> mid[prev]; the half of side `prev` starting at c.
      t.edges[2] = half_from_start(prev);
      t.aligned[2] = f.aligned[prev];
      faces.push_back(t);
    }
    Face center;
    center.vertices = mid;
    for (int k = 0; k < 3; ++k) {
      center.edges[k] = inner[k];
      center.aligned[k] = true;
    }
    faces.push_back(center);
  }
  return IntrinsicMesh::from_gluing(nv + ne, std::move(faces), std::move(ev), std::move(lengths));
}

std::vector<double> seeded_uniform(std::size_t count, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) {
    // 53-bit mantissa construction; portable across standard libraries.
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = amplitude * (2.0 * unit - 1.0);
  }
  return out;
}

IntrinsicMesh generate_genus2(const Genus2Params& params) {
  if (params.subdivision_rounds < 1) {
    throw PreconditionError("subdivision_rounds must be at least 1");
  }
  if (!(params.perturbation_amplitude >= 0.0)) {
    throw PreconditionError("perturbation_amplitude must be non-negative");
  }
  IntrinsicMesh base = octagon_genus2();
  for (int i = 0; i < params.subdivision_rounds; ++i) base = subdivide(base);
  if (params.perturbation_amplitude == 0.0) return base;

  double amplitude = params.perturbation_amplitude;
  for (int attempt = 0; attempt <= kPerturbationRetries; ++attempt, amplitude *= 0.5) {
    const auto eta = seeded_uniform(base.vertex_count(), amplitude, params.seed);
    std::vector<double> lengths = base.reference_lengths();
    for (std::size_t e = 0; e < lengths.size(); ++e) {
      const auto& v = base.edge(e).vertices;
      lengths[e] *= std::exp(0.5 * (eta[v[0]] + eta[v[1]]));
    }
    try {
      return base.with_lengths(std::move(lengths));
    } catch (const DegenerateTriangle&) {
    }
  }
  throw DegenerateTriangle("perturbation breaks the triangle inequality after " +
                           std::to_string(kPerturbationRetries) + " halvings");
}

}  // namespace ricci
