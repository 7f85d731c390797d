#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricci/flow.hpp"

namespace ricci {

/// Parameters of the comparison ODE ds/dt = s (s - r), s(0) = 2 sigma.
struct BarrierParams {
  double r = -1.0;       ///< average scalar curvature, < 0
  double sigma = -1.0;   ///< lower bound of the initial Gauss curvature, sigma <= r/2
  double lambda0 = 1.0;  ///< initial eigenvalue for the eigenvalue bound

  /// r / (2 sigma), in (0, 1].
  double ratio() const { return r / (2.0 * sigma); }
  /// Throws PreconditionError unless r < 0 and sigma <= r/2.
  void validate() const;
};

/// s(t) = r / (1 - (1 - r/(2 sigma)) e^{r t}); rises from 2 sigma toward r.
double barrier_s(double t, const BarrierParams& p);

/// Classical RK4 on ds/dt = s (s - r) from s(0) = 2 sigma; independent check of barrier_s.
double barrier_s_oracle(double t, const BarrierParams& p, int steps = 10000);

/// B(t) = lambda0 (r/(2 sigma)) / (1 - (1 - r/(2 sigma)) e^{r t}); falls from lambda0
/// toward lambda0 r/(2 sigma).
double lower_bound_B(double t, const BarrierParams& p);

/// Scalar time series of a trace: what the verdicts need, and what the CSV
/// export carries. Tracked eigenvalues are per index (1..k) per sample.
struct TraceSeries {
  std::vector<double> t;
  std::vector<double> volume;
  std::vector<double> r;
  std::vector<double> scalar_min;
  std::vector<double> scalar_max;
  std::vector<std::vector<double>> lambda;
  std::vector<bool> ambiguous;

  int euler_characteristic = 0;
  double r_const = 0.0;
  double sigma = 0.0;
  double volume0 = 0.0;
  double convergence_tol = 0.0;
  bool converged = false;

  std::size_t size() const { return t.size(); }
  int eigen_count() const { return static_cast<int>(lambda.size()); }
};

TraceSeries summarize(const FlowTrace& trace, double convergence_tol);

inline constexpr double kBarrierTolerance = 1e-2;     // times |r|, absolute on R
inline constexpr double kEigenBoundTolerance = 1e-3;  // relative on B
inline constexpr double kTheoremTolerance = 1e-3;     // relative on the right-hand side

struct BarrierVerdict {
  bool ok = false;
  double tolerance = 0.0;
  double worst_margin = 0.0;  ///< min over snapshots of R_min(t) - s(t)
  double worst_time = 0.0;
  std::size_t worst_sample = 0;
};

/// min_i R_i(t) >= s(t) - 1e-2 |r| at every snapshot.
BarrierVerdict check_max_principle(const TraceSeries& series, std::optional<double> sigma_override = std::nullopt);

struct EigenBoundVerdict {
  int index = 1;
  bool ok = false;
  bool reliable = true;        ///< false when the track was ambiguous
  double worst_margin = 0.0;   ///< min over samples of lambda(t) / B(t) - 1
  double worst_time = 0.0;
  bool limit_ok = false;       ///< lambda(T) >= lambda(0) r/(2 sigma) (1 - 1e-3)
  double limit_margin = 0.0;   ///< lambda(T) / (lambda(0) r/(2 sigma)) - 1
};

/// lambda_i(t) >= B(t) (1 - 1e-3) along the tracked branch, plus the t -> infinity form.
EigenBoundVerdict check_eigen_bound(const TraceSeries& series, int index,
                                    std::optional<double> sigma_override = std::nullopt);

struct TheoremIndexResult {
  int index = 1;
  double lambda_g = 0.0;
  double lambda_tilde = 0.0;
  double tolerance = 0.0;
  bool theorem1_ok = false;   ///< lambda_g / kappa_g >= lambda~ / kappa~
  bool theorem2a_ok = false;  ///< lambda_g <= (lambda~ / kappa~) sigma
  bool theorem2b_ok = false;  ///< lambda_g <= lambda~ vol(g~) sigma / (2 pi chi)
  bool theorem2b_consistent = false;  ///< 2a and 2b right-hand sides agree
  bool theorem2c_ok = false;  ///< lambda_g <= (lambda~ / kappa~) kappa_g
  bool barrier_ok = false;    ///< eigenvalue bound along the trace
  bool reliable = true;
  double margin_t1 = 0.0;     ///< lhs - rhs of theorem 1 (>= -tol / |kappa_g| passes)
  double margin_t2a = 0.0;    ///< rhs - lhs
  double margin_t2b = 0.0;
  double margin_t2c = 0.0;
  double rhs_t1 = 0.0;
  double rhs_t2a = 0.0;
  double rhs_t2b = 0.0;
  double rhs_t2c = 0.0;
  EigenBoundVerdict eigen_bound;
};

struct TheoremReport {
  int euler_characteristic = 0;
  double r = 0.0;
  double kappa_g = 0.0;
  double kappa_tilde = 0.0;           ///< r / 2
  double kappa_tilde_measured_min = 0.0;
  double kappa_tilde_measured_max = 0.0;
  double sigma = 0.0;
  bool sigma_overridden = false;
  /// sigma <= kappa_g, i.e. sigma really bounds the initial Gauss curvature.
  bool sigma_admissible = true;
  double volume_g = 0.0;
  double volume_tilde = 0.0;
  double final_time = 0.0;
  bool pointwise_bound_ok = false;
  BarrierVerdict max_principle;
  std::vector<TheoremIndexResult> indices;
  /// Theorem 1 and Theorem 2c agree whenever sigma = kappa_g.
  bool equivalence_ok = true;

  /// Every theorem inequality and eigenvalue bound holds on reliable tracks.
  /// The pointwise curvature barrier is only included when asked for.
  bool all_ok(bool require_pointwise = false) const;
};

/// Evaluates every inequality per tracked index. Throws PreconditionError for
/// a trace that did not converge.
TheoremReport check_theorems(const TraceSeries& series, std::optional<double> sigma_override = std::nullopt);

}  // namespace ricci
