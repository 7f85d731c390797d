#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ricci/mesh.hpp"

namespace ricci {

/// Conformal metric l_e(u) = exp((u_i + u_j) / 2) * l0_e at flow time t.
struct MetricState {
  std::vector<double> u;
  double t = 0.0;

  static MetricState zero(const IntrinsicMesh& mesh) { return {std::vector<double>(mesh.vertex_count(), 0.0), 0.0}; }
};

struct CurvatureField {
  std::vector<double> deficit;  ///< 2*pi minus incident corner angles
  std::vector<double> area;     ///< barycentric lumped area, (1/3) of incident triangles
  std::vector<double> gauss;    ///< deficit / area
  std::vector<double> scalar;   ///< 2 * gauss
  double volume = 0.0;
  double average_scalar = 0.0;  ///< 4*pi*chi / volume
  double min_gauss = 0.0;
  double max_gauss = 0.0;
  int euler_characteristic = 0;

  double min_scalar() const { return 2.0 * min_gauss; }
  double max_scalar() const { return 2.0 * max_gauss; }
  /// max_i |R_i - r|.
  double scalar_deviation() const;
};

struct CornerAngles {
  double alpha = 0.0;  ///< opposite a
  double beta = 0.0;   ///< opposite b
  double gamma = 0.0;  ///< opposite c
};

/// Interior angles from side lengths (half-angle tangent form). Throws
/// DegenerateTriangle unless the strict triangle inequality holds.
CornerAngles corner_angles(double a, double b, double c);

/// Area from side lengths using Kahan's cancellation-free Heron ordering.
double triangle_area(double a, double b, double c);

/// Cotangent of the angle opposite `a`.
double cotangent_opposite(double a, double b, double c);

/// Effective per-edge lengths under the state's conformal factors.
std::vector<double> effective_lengths(const IntrinsicMesh& mesh, const MetricState& state);

/// First face whose effective lengths violate the strict triangle inequality.
std::optional<std::size_t> first_degenerate_face(const IntrinsicMesh& mesh, std::span<const double> lengths);

CurvatureField curvature_field(const IntrinsicMesh& mesh, const MetricState& state);
CurvatureField curvature_field(const IntrinsicMesh& mesh, std::span<const double> lengths);

/// Total area only; cheaper than a full curvature field.
double total_area(const IntrinsicMesh& mesh, std::span<const double> lengths);

/// w_e = (cot theta_1 + cot theta_2) / 2 over the two angles opposite edge e.
std::vector<double> cotan_weights(const IntrinsicMesh& mesh, const MetricState& state);
std::vector<double> cotan_weights(const IntrinsicMesh& mesh, std::span<const double> lengths);

/// The mesh with reference lengths replaced by the state's effective lengths,
/// so that u = 0 on the result reproduces the state's metric.
IntrinsicMesh bake_metric(const IntrinsicMesh& mesh, const MetricState& state);

}  // namespace ricci
