#include "ricci/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ricci/error.hpp"

namespace ricci {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool strict_triangle(double a, double b, double c) {
  return a > 0.0 && b > 0.0 && c > 0.0 && a < b + c && b < a + c && c < a + b;
}

// Angle opposite `opp`: tan(theta/2) = sqrt((s-b)(s-c) / (s (s-opp))), with
// each (s - x) formed as a sum of differences of the raw lengths.
double half_angle(double opp, double b, double c) {
  const double sb = (opp - b) + c;
  const double sc = (opp - c) + b;
  const double so = (b - opp) + c;
  return 2.0 * std::atan(std::sqrt((sb * sc) / ((opp + b + c) * so)));
}

std::array<double, 3> face_lengths(const Face& f, std::span<const double> lengths) {
  return {lengths[f.edges[0]], lengths[f.edges[1]], lengths[f.edges[2]]};
}

}  // namespace

double CurvatureField::scalar_deviation() const {
  double worst = 0.0;
  for (double r : scalar) worst = std::max(worst, std::abs(r - average_scalar));
  return worst;
}

CornerAngles corner_angles(double a, double b, double c) {
  if (!strict_triangle(a, b, c)) {
    throw DegenerateTriangle("degenerate triangle (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                             std::to_string(c) + ")");
  }
  CornerAngles out;
  out.alpha = half_angle(a, b, c);
  out.beta = half_angle(b, a, c);
  out.gamma = half_angle(c, a, b);
  return out;
}

double triangle_area(double a, double b, double c) {
  if (!strict_triangle(a, b, c)) {
    throw DegenerateTriangle("degenerate triangle (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                             std::to_string(c) + ")");
  }
  std::array<double, 3> l{a, b, c};
  std::sort(l.begin(), l.end(), std::greater<>());
  const double x = l[0], y = l[1], z = l[2];
  return 0.25 * std::sqrt((x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z)));
}

double cotangent_opposite(double a, double b, double c) {
  return (b * b + c * c - a * a) / (4.0 * triangle_area(a, b, c));
}

std::vector<double> effective_lengths(const IntrinsicMesh& mesh, const MetricState& state) {
  std::vector<double> out(mesh.edge_count());
  for (std::size_t e = 0; e < out.size(); ++e) {
    const auto& v = mesh.edge(e).vertices;
    out[e] = std::exp(0.5 * (state.u[v[0]] + state.u[v[1]])) * mesh.edge(e).length;
  }
  return out;
}

std::optional<std::size_t> first_degenerate_face(const IntrinsicMesh& mesh, std::span<const double> lengths) {
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto l = face_lengths(mesh.face(f), lengths);
    if (!strict_triangle(l[0], l[1], l[2])) return f;
  }
  return std::nullopt;
}

CurvatureField curvature_field(const IntrinsicMesh& mesh, const MetricState& state) {
  return curvature_field(mesh, effective_lengths(mesh, state));
}

CurvatureField curvature_field(const IntrinsicMesh& mesh, std::span<const double> lengths) {
  const std::size_t nv = mesh.vertex_count();
  CurvatureField field;
  field.deficit.assign(nv, kTwoPi);
  field.area.assign(nv, 0.0);
  field.euler_characteristic = mesh.euler_characteristic();

  // Fixed face order keeps the global reductions deterministic.
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Face& face = mesh.face(f);
    const auto l = face_lengths(face, lengths);
    if (!strict_triangle(l[0], l[1], l[2])) {
      throw DegenerateTriangle("face " + std::to_string(f) + " violates the triangle inequality", f);
    }
    const CornerAngles ang = corner_angles(l[0], l[1], l[2]);
    const double area = triangle_area(l[0], l[1], l[2]);
    field.deficit[face.vertices[0]] -= ang.alpha;
    field.deficit[face.vertices[1]] -= ang.beta;
    field.deficit[face.vertices[2]] -= ang.gamma;
    for (Index v : face.vertices) field.area[v] += area / 3.0;
    field.volume += area;
  }

  field.gauss.resize(nv);
  field.scalar.resize(nv);
  field.min_gauss = std::numeric_limits<double>::infinity();
  field.max_gauss = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < nv; ++v) {
    field.gauss[v] = field.deficit[v] / field.area[v];
    field.scalar[v] = 2.0 * field.gauss[v];
    field.min_gauss = std::min(field.min_gauss, field.gauss[v]);
    field.max_gauss = std::max(field.max_gauss, field.gauss[v]);
  }
  field.average_scalar = 4.0 * std::numbers::pi * field.euler_characteristic / field.volume;
  return field;
}

double total_area(const IntrinsicMesh& mesh, std::span<const double> lengths) {
  double v = 0.0;
  for (const Face& face : mesh.faces()) {
    const auto l = face_lengths(face, lengths);
    v += triangle_area(l[0], l[1], l[2]);
  }
  return v;
}

std::vector<double> cotan_weights(const IntrinsicMesh& mesh, const MetricState& state) {
  return cotan_weights(mesh, effective_lengths(mesh, state));
}

std::vector<double> cotan_weights(const IntrinsicMesh& mesh, std::span<const double> lengths) {
  std::vector<double> w(mesh.edge_count(), 0.0);
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Face& face = mesh.face(f);
    const auto l = face_lengths(face, lengths);
    if (!strict_triangle(l[0], l[1], l[2])) {
      throw DegenerateTriangle("face " + std::to_string(f) + " violates the triangle inequality", f);
    }
    const double four_area = 4.0 * triangle_area(l[0], l[1], l[2]);
    const double sq[3] = {l[0] * l[0], l[1] * l[1], l[2] * l[2]};
    for (int k = 0; k < 3; ++k) {
      const double cot = (sq[(k + 1) % 3] + sq[(k + 2) % 3] - sq[k]) / four_area;
      w[face.edges[k]] += 0.5 * cot;
    }
  }
  return w;
}

IntrinsicMesh bake_metric(const IntrinsicMesh& mesh, const MetricState& state) {
  return mesh.with_lengths(effective_lengths(mesh, state));
}

}  // namespace ricci
