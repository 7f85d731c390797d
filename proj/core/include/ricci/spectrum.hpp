#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ricci/geometry.hpp"
#include "ricci/mesh.hpp"

namespace ricci {

/// Cotangent stiffness L and lumped mass M; L u = lambda M u discretizes -Delta u = lambda u.
struct LaplaceOperators {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;  ///< diagonal of M (barycentric vertex areas)
};

/// The smallest generalized eigenpairs at one flow time. Column 0 is the
/// constant kernel; eigenvectors are M-orthonormal.
struct SpectrumSlice {
  double t = 0.0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd mass;
  int iterations = 0;

  int count() const { return static_cast<int>(eigenvalues.size()); }
};

struct EigenSolverOptions {
  int max_iterations = 500;
  /// Converged when ||L x - lambda M x|| <= residual_tol * ||M x|| * max(lambda, 1).
  double residual_tol = 1e-10;
  /// Extra block columns beyond the wanted pairs.
  int guard_vectors = 6;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

LaplaceOperators assemble_operators(const IntrinsicMesh& mesh, const MetricState& state);
LaplaceOperators assemble_operators(const IntrinsicMesh& mesh, std::span<const double> lengths);

/// The k+1 smallest pairs (kernel included) by shift-invert subspace iteration
/// with M-orthonormal Rayleigh-Ritz. `warm_start`, when given, seeds the block
/// with its eigenvectors. Throws SolverError when the budget runs out.
SpectrumSlice smallest_eigenpairs(const LaplaceOperators& ops, int k, const EigenSolverOptions& options = {},
                                  const SpectrumSlice* warm_start = nullptr);

/// ||L x - lambda M x|| / (||M x|| * max(lambda, 1)) for column `i`.
double relative_residual(const LaplaceOperators& ops, const SpectrumSlice& slice, int i);

/// Pairing between consecutive slices: previous column p continues as next
/// column `next_index[p]` with |normalized mass inner product| `quality[p]`.
struct EigenPairing {
  std::vector<int> next_index;
  std::vector<double> quality;
};

/// Greedy matching by descending overlap, measured in the next slice's mass.
EigenPairing track_eigenpairs(const SpectrumSlice& prev, const SpectrumSlice& next);

struct TrackSample {
  double t = 0.0;
  double lambda = 0.0;
  std::size_t slice = 0;  ///< position in the slice sequence the track was built from
  int column = 0;
};

/// One eigenvalue branch followed through time, starting from sorted index i at t=0.
struct EigenTrack {
  int index = 1;
  std::vector<TrackSample> samples;
  std::vector<double> pairing_quality;  ///< one per transition
  double overlap_floor = 0.5;

  bool ambiguous() const;
  /// True when the transition into sample s (s >= 1) met the floor.
  bool transition_ok(std::size_t s) const { return pairing_quality[s - 1] >= overlap_floor; }
};

/// Incremental tracker for indices 1..count over a growing sequence of slices.
class EigenTracker {
 public:
  EigenTracker(int count, double overlap_floor);
  void push(const SpectrumSlice& slice);
  const std::vector<EigenTrack>& tracks() const { return tracks_; }

 private:
  int count_;
  double floor_;
  std::size_t pushed_ = 0;
  std::shared_ptr<const SpectrumSlice> last_;
  std::vector<EigenTrack> tracks_;
};

/// dlambda_i/dt = lambda_i * sum_j (R_j - r) u_j^2 A_j / sum_j u_j^2 A_j.
double eigenvalue_time_derivative(const CurvatureField& curvature, const SpectrumSlice& slice, int i);

}  // namespace ricci
