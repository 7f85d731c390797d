#include "ricci/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ricci/error.hpp"

namespace ricci {

void BarrierParams::validate() const {
  if (!(r < 0.0)) throw PreconditionError("barrier requires r < 0");
  if (!(sigma <= 0.5 * r)) throw PreconditionError("barrier requires sigma <= r/2");
}

double barrier_s(double t, const BarrierParams& p) {
  return p.r / (1.0 - (1.0 - p.ratio()) * std::exp(p.r * t));
}

double barrier_s_oracle(double t, const BarrierParams& p, int steps) {
  if (steps < 1) throw PreconditionError("oracle needs at least one step");
  const double h = t / steps;
  const double r = p.r;
  auto f = [r](double s) { return s * (s - r); };
  double s = 2.0 * p.sigma;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(s);
    const double k2 = f(s + 0.5 * h * k1);
    const double k3 = f(s + 0.5 * h * k2);
    const double k4 = f(s + h * k3);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

double lower_bound_B(double t, const BarrierParams& p) {
  const double q = p.ratio();
  return p.lambda0 * q / (1.0 - (1.0 - q) * std::exp(p.r * t));
}

TraceSeries summarize(const FlowTrace& trace, double convergence_tol) {
  TraceSeries series;
  series.euler_characteristic = trace.euler_characteristic;
  series.r_const = trace.r;
  series.sigma = trace.sigma;
  series.volume0 = trace.volume0;
  series.convergence_tol = convergence_tol;
  series.converged = trace.converged;
  for (const FlowSnapshot& snap : trace.snapshots) {
    series.t.push_back(snap.state.t);
    series.volume.push_back(snap.curvature.volume);
    series.r.push_back(snap.curvature.average_scalar);
    series.scalar_min.push_back(snap.curvature.min_scalar());
    series.scalar_max.push_back(snap.curvature.max_scalar());
  }
  for (const EigenTrack& track : trace.tracks) {
    std::vector<double> values;
    values.reserve(track.samples.size());
    for (const TrackSample& s : track.samples) values.push_back(s.lambda);
    series.lambda.push_back(std::move(values));
    series.ambiguous.push_back(track.ambiguous());
  }
  return series;
}

BarrierVerdict check_max_principle(const TraceSeries& series, std::optional<double> sigma_override) {
  BarrierParams p{series.r_const, sigma_override.value_or(series.sigma), 1.0};
  p.validate();
  BarrierVerdict v;
  v.tolerance = kBarrierTolerance * std::abs(p.r);
  v.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double margin = series.scalar_min[s] - barrier_s(series.t[s], p);
    if (margin < v.worst_margin) {
      v.worst_margin = margin;
      v.worst_time = series.t[s];
      v.worst_sample = s;
    }
  }
  v.ok = v.worst_margin >= -v.tolerance;
  return v;
}

EigenBoundVerdict check_eigen_bound(const TraceSeries& series, int index, std::optional<double> sigma_override) {
  if (index < 1 || index > series.eigen_count()) throw PreconditionError("eigen index out of range");
  const auto& lambda = series.lambda[static_cast<std::size_t>(index - 1)];
  BarrierParams p{series.r_const, sigma_override.value_or(series.sigma), lambda.front()};
  p.validate();

  EigenBoundVerdict v;
  v.index = index;
  v.reliable = !series.ambiguous[static_cast<std::size_t>(index - 1)];
  v.worst_margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    const double bound = lower_bound_B(series.t[s], p);
    const double margin = lambda[s] / bound - 1.0;
    if (margin < v.worst_margin) {
      v.worst_margin = margin;
      v.worst_time = series.t[s];
    }
    ok = ok && lambda[s] >= bound * (1.0 - kEigenBoundTolerance);
  }
  const double limit = p.lambda0 * p.ratio();
  v.limit_margin = lambda.back() / limit - 1.0;
  v.limit_ok = lambda.back() >= limit * (1.0 - kEigenBoundTolerance);
  v.ok = ok && v.limit_ok && v.reliable;
  return v;
}

bool TheoremReport::all_ok(bool require_pointwise) const {
  if (require_pointwise && !pointwise_bound_ok) return false;
  if (!sigma_admissible || !equivalence_ok || indices.empty()) return false;
  return std::all_of(indices.begin(), indices.end(), [](const TheoremIndexResult& r) {
    return r.reliable && r.theorem1_ok && r.theorem2a_ok && r.theorem2b_ok && r.theorem2b_consistent &&
           r.theorem2c_ok && r.barrier_ok;
  });
}

TheoremReport check_theorems(const TraceSeries& series, std::optional<double> sigma_override) {
  if (!series.converged) throw PreconditionError("theorem verdicts need a converged trace");
  if (series.size() == 0) throw PreconditionError("empty trace");

  TheoremReport report;
  report.euler_characteristic = series.euler_characteristic;
  report.r = series.r_const;
  report.kappa_g = 0.5 * series.scalar_min.front();
  report.kappa_tilde = 0.5 * series.r_const;
  report.kappa_tilde_measured_min = 0.5 * series.scalar_min.back();
  report.kappa_tilde_measured_max = 0.5 * series.scalar_max.back();
  report.sigma = sigma_override.value_or(series.sigma);
  report.sigma_overridden = sigma_override.has_value();
  report.sigma_admissible = report.sigma <= report.kappa_g;
  report.volume_g = series.volume.front();
  report.volume_tilde = series.volume.back();
  report.final_time = series.t.back();
  report.max_principle = check_max_principle(series, sigma_override);
  report.pointwise_bound_ok = report.max_principle.ok;

  const double kappa_g = report.kappa_g;
  const double kappa_t = report.kappa_tilde;
  const double sigma = report.sigma;
  const double two_pi_chi = 2.0 * std::numbers::pi * series.euler_characteristic;

  for (int i = 1; i <= series.eigen_count(); ++i) {
    const auto& lambda = series.lambda[static_cast<std::size_t>(i - 1)];
    TheoremIndexResult res;
    res.index = i;
    res.lambda_g = lambda.front();
    res.lambda_tilde = lambda.back();
    res.reliable = !series.ambiguous[static_cast<std::size_t>(i - 1)];
    res.tolerance = kTheoremTolerance * std::abs(res.lambda_tilde) * std::abs(kappa_g / kappa_t);

    const double slope = res.lambda_tilde / kappa_t;
    // Ratio form; the tolerance is carried over by dividing through by |kappa_g|.
    res.rhs_t1 = slope;
    res.margin_t1 = res.lambda_g / kappa_g - res.rhs_t1;
    res.theorem1_ok = res.margin_t1 >= -res.tolerance / std::abs(kappa_g);

    res.rhs_t2a = slope * sigma;
    res.margin_t2a = res.rhs_t2a - res.lambda_g;
    res.theorem2a_ok = res.margin_t2a >= -res.tolerance;

    res.rhs_t2b = res.lambda_tilde / two_pi_chi * report.volume_tilde * sigma;
    res.margin_t2b = res.rhs_t2b - res.lambda_g;
    res.theorem2b_ok = res.margin_t2b >= -res.tolerance;
    res.theorem2b_consistent = std::abs(res.rhs_t2b - res.rhs_t2a) <= 1e-9 * std::abs(res.rhs_t2a);

    res.rhs_t2c = slope * kappa_g;
    res.margin_t2c = res.rhs_t2c - res.lambda_g;
    res.theorem2c_ok = res.margin_t2c >= -res.tolerance;

    res.eigen_bound = check_eigen_bound(series, i, sigma_override);
    res.barrier_ok = res.eigen_bound.ok;

    if (res.theorem1_ok != res.theorem2c_ok) report.equivalence_ok = false;
    report.indices.push_back(res);
  }
  return report;
}

}  // namespace ricci
