#pragma once

#include <cstdint>
#include <vector>

#include "ricci/mesh.hpp"

namespace ricci {

struct Genus2Params {
  int subdivision_rounds = 3;
  double perturbation_amplitude = 0.0;
  std::uint64_t seed = 0;
};

/// Regular octagon (circumradius 1) with sides glued by a b a^-1 b^-1 c d c^-1 d^-1
/// and fanned from a center vertex: 2 vertices, 12 edges, 8 faces. All eight
/// octagon corners become a single cone vertex of total angle 6*pi.
IntrinsicMesh octagon_genus2();

/// One round of 4-to-1 midpoint subdivision, carried out inside each flat
/// triangle (new interior edges are half the parallel side).
IntrinsicMesh subdivide(const IntrinsicMesh& mesh);

/// Closed genus-2 mesh: octagon gluing, `subdivision_rounds` midpoint
/// subdivisions, then l_e *= exp((eta_i + eta_j) / 2) with eta drawn
/// uniformly from [-amplitude, amplitude]. When the perturbation breaks a
/// triangle inequality the amplitude is halved and the draw repeated, up to
/// kPerturbationRetries times.
IntrinsicMesh generate_genus2(const Genus2Params& params);

inline constexpr int kPerturbationRetries = 8;

/// Deterministic uniform draws in [-amplitude, amplitude] from a seeded mt19937_64.
std::vector<double> seeded_uniform(std::size_t count, double amplitude, std::uint64_t seed);

}  // namespace ricci
