#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ricci/geometry.hpp"
#include "ricci/mesh.hpp"
#include "ricci/spectrum.hpp"

namespace ricci {

struct FlowConfig {
  double dt_init = 1e-2;
  double dt_min = 1e-12;
  double safety_shrink = 0.5;
  /// Converged when max_i |R_i - r| <= convergence_tol * |r|.
  double convergence_tol = 1e-3;
  long max_steps = 200000;
  /// A snapshot (with spectrum) is recorded every this many accepted steps.
  int snapshot_stride = 1;
  /// Number of non-kernel eigenvalues recorded and tracked.
  int eigen_count = 5;
  /// Minimum overlap for an unambiguous pairing between snapshots.
  double overlap_floor = 0.5;
  /// Cap each step at the explicit-Euler stability limit of the linearized
  /// flow. Disable to see the raw dt_init/safety_shrink behaviour.
  bool stability_limit = true;
};

/// Throws PreconditionError on an inconsistent configuration.
void validate(const FlowConfig& config);

struct FlowSnapshot {
  MetricState state;
  CurvatureField curvature;
  std::optional<SpectrumSlice> spectrum;
  long step = 0;
};

struct FlowTrace {
  std::vector<FlowSnapshot> snapshots;
  std::vector<EigenTrack> tracks;
  double sigma = 0.0;  ///< min Gauss curvature at t = 0
  double r = 0.0;      ///< 4*pi*chi / V0
  double volume0 = 0.0;
  int euler_characteristic = 0;
  bool converged = false;
  long step_count = 0;
  long rejected_steps = 0;

  const FlowSnapshot& initial() const { return snapshots.front(); }
  const FlowSnapshot& final() const { return snapshots.back(); }
};

/// r = 4*pi*chi / V.
double average_scalar(const CurvatureField& curvature);

struct StepOutcome {
  bool accepted = false;
  MetricState state;
  std::size_t offending_face = 0;  ///< valid when rejected
};

/// One explicit Euler step of du_i/dt = (r - R_i)/2 followed by the constant
/// shift of u that restores `target_volume` (default: the input volume).
/// A raw update that breaks a triangle inequality is rejected, not thrown.
StepOutcome flow_step(const IntrinsicMesh& mesh, const MetricState& state, double dt,
                      std::optional<double> target_volume = std::nullopt);
StepOutcome flow_step(const IntrinsicMesh& mesh, const MetricState& state, const CurvatureField& curvature,
                      double r, double dt, double target_volume);

/// Largest explicit step the linearized flow tolerates at this metric
/// (Gershgorin bound on the Jacobian of (r - R)/2).
double stable_step(const IntrinsicMesh& mesh, std::span<const double> lengths, const CurvatureField& curvature);

/// Integrates from u = 0 until the relative sup-norm of R - r drops below
/// the tolerance or the step budget runs out. Throws FlowRefusal for chi >= 0
/// and StepUnderflow when rejections push dt below dt_min.
FlowTrace run_flow(const IntrinsicMesh& mesh, const FlowConfig& config, const EigenSolverOptions& solver = {});

}  // namespace ricci
