#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "ricci/error.hpp"

namespace ricci {

namespace {

constexpr double kDtGrowth = 1.1;
// Tracked pairs solved beyond eigen_count so a branch can leave the window
// without being forced onto a wrong partner.
constexpr int kTrackingGuard = 2;

}  // namespace

void validate(const FlowConfig& config) {
  auto fail = [](const std::string& what) { throw PreconditionError("invalid flow config: " + what); };
  if (!(config.dt_init > 0.0)) fail("dt_init must be positive");
  if (!(config.dt_min > 0.0)) fail("dt_min must be positive");
  if (!(config.dt_min < config.dt_init)) fail("dt_min must be below dt_init");
  if (!(config.safety_shrink > 0.0 && config.safety_shrink < 1.0)) fail("safety_shrink must lie in (0, 1)");
  if (!(config.convergence_tol > 0.0)) fail("convergence_tol must be positive");
  if (config.max_steps < 0) fail("max_steps must be non-negative");
  if (config.snapshot_stride < 1) fail("snapshot_stride must be at least 1");
  if (config.eigen_count < 1) fail("eigen_count must be at least 1");
  if (!(config.overlap_floor >= 0.0 && config.overlap_floor <= 1.0)) fail("overlap_floor must lie in [0, 1]");
}

double average_scalar(const CurvatureField& curvature) {
  return 4.0 * std::numbers::pi * curvature.euler_characteristic / curvature.volume;
}

StepOutcome flow_step(const IntrinsicMesh& mesh, const MetricState& state, double dt,
                      std::optional<double> target_volume) {
  const CurvatureField curvature = curvature_field(mesh, state);
  return flow_step(mesh, state, curvature, curvature.average_scalar, dt, target_volume.value_or(curvature.volume));
}

StepOutcome flow_step(const IntrinsicMesh& mesh, const MetricState& state, const CurvatureField& curvature,
                      double r, double dt, double target_volume) {
  if (!(dt > 0.0)) throw PreconditionError("flow_step requires dt > 0");
  StepOutcome out;
  out.state.u = state.u;
  out.state.t = state.t + dt;
  for (std::size_t i = 0; i < out.state.u.size(); ++i) {
    out.state.u[i] += 0.5 * dt * (r - curvature.scalar[i]);
  }
  const std::vector<double> lengths = effective_lengths(mesh, out.state);
  if (auto bad = first_degenerate_face(mesh, lengths)) {
    out.accepted = false;
    out.offending_face = *bad;
    return out;
  }
  const double shift = 0.5 * std::log(target_volume / total_area(mesh, lengths));
  for (double& u : out.state.u) u += shift;
  out.accepted = true;
  return out;
}

double stable_step(const IntrinsicMesh& mesh, std::span<const double> lengths, const CurvatureField& curvature) {
  const std::vector<double> w = cotan_weights(mesh, lengths);
  std::vector<double> row(mesh.vertex_count(), 0.0);
  for (std::size_t e = 0; e < w.size(); ++e) {
    const auto [i, j] = mesh.edge(e).vertices;
    if (i == j) continue;
    row[i] += std::abs(w[e]);
    row[j] += std::abs(w[e]);
  }
  double rate = 0.0;
  for (std::size_t v = 0; v < row.size(); ++v) {
    rate = std::max(rate, 2.0 * row[v] / curvature.area[v] + std::abs(curvature.scalar[v]));
  }
  return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

FlowTrace run_flow(const IntrinsicMesh& mesh, const FlowConfig& config, const EigenSolverOptions& solver) {
  validate(config);
  const int chi = mesh.euler_characteristic();
  if (chi >= 0) {
    throw FlowRefusal("normalized flow requires chi < 0 (got chi = " + std::to_string(chi) + ")");
  }
  const int solve_count = config.eigen_count + kTrackingGuard;
  if (static_cast<std::size_t>(solve_count) + 1 > mesh.vertex_count()) {
    throw PreconditionError("mesh too small for eigen_count = " + std::to_string(config.eigen_count));
  }

  FlowTrace trace;
  trace.euler_characteristic = chi;
  MetricState state = MetricState::zero(mesh);
  std::vector<double> lengths = effective_lengths(mesh, state);
  CurvatureField curvature = curvature_field(mesh, lengths);
  trace.r = curvature.average_scalar;
  trace.volume0 = curvature.volume;
  trace.sigma = curvature.min_gauss;

  EigenTracker tracker(config.eigen_count, config.overlap_floor);
  auto record = [&](long step) {
    FlowSnapshot snap;
    snap.state = state;
    snap.curvature = curvature;
    snap.step = step;
    const SpectrumSlice* warm = trace.snapshots.empty() ? nullptr : &*trace.snapshots.back().spectrum;
    SpectrumSlice slice = smallest_eigenpairs(assemble_operators(mesh, lengths), solve_count, solver, warm);
    slice.t = state.t;
    tracker.push(slice);
    snap.spectrum = std::move(slice);
    trace.snapshots.push_back(std::move(snap));
  };
  record(0);

  const double target = config.convergence_tol * std::abs(trace.r);
  double dt = config.dt_init;
  long steps = 0;
  while (true) {
    if (curvature.scalar_deviation() <= target) {
      trace.converged = true;
      break;
    }
    if (steps >= config.max_steps) break;
    const double h = config.stability_limit ? std::min(dt, stable_step(mesh, lengths, curvature)) : dt;
    StepOutcome outcome = flow_step(mesh, state, curvature, trace.r, h, trace.volume0);
    if (!outcome.accepted) {
      ++trace.rejected_steps;
      dt = h * config.safety_shrink;
      if (dt < config.dt_min) {
        throw StepUnderflow(fmt::format("step size {:.3g} fell below dt_min = {:.3g} at t = {:.9g}; face {} "
                                        "violates the triangle inequality",
                                        dt, config.dt_min, state.t, outcome.offending_face),
                            outcome.offending_face, state.t);
      }
      continue;
    }
    state = std::move(outcome.state);
    ++steps;
    lengths = effective_lengths(mesh, state);
    curvature = curvature_field(mesh, lengths);
    if (steps % config.snapshot_stride == 0) record(steps);
    dt = std::min(config.dt_init, dt * kDtGrowth);
  }
  if (trace.snapshots.back().step != steps) record(steps);

  trace.step_count = steps;
  trace.tracks = tracker.tracks();
  return trace;
}

}  // namespace ricci
