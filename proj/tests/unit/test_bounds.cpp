#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ricci/bounds.hpp"
#include "ricci/error.hpp"
#include "ricci/generator.hpp"
#include "support.hpp"

using namespace ricci;

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

double barrier_extended(double t, double r, double sigma) {
  const big R(r), S(sigma), T(t);
  return static_cast<double>(R / (1 - (1 - R / (2 * S)) * exp(R * T)));
}

TraceSeries constant_series(double r, double lambda, int k = 3) {
  TraceSeries s;
  s.euler_characteristic = -2;
  s.r_const = r;
  s.sigma = r / 2;
  s.volume0 = 4 * std::numbers::pi * s.euler_characteristic / r;
  s.convergence_tol = 1e-3;
  s.converged = true;
  for (double t : {0.0, 0.5, 1.0}) {
    s.t.push_back(t);
    s.volume.push_back(s.volume0);
    s.r.push_back(r);
    s.scalar_min.push_back(r);
    s.scalar_max.push_back(r);
  }
  for (int i = 0; i < k; ++i) s.lambda.push_back(std::vector<double>(3, lambda * (i + 1)));
  s.ambiguous.assign(static_cast<std::size_t>(k), false);
  return s;
}

TraceSeries scaled(const TraceSeries& s, double rho) {
  TraceSeries out = s;
  const double f = 1.0 / (rho * rho);
  out.r_const *= f;
  out.sigma *= f;
  out.volume0 /= f;
  for (double& x : out.t) x /= f;
  for (double& x : out.volume) x /= f;
  for (double& x : out.r) x *= f;
  for (double& x : out.scalar_min) x *= f;
  for (double& x : out.scalar_max) x *= f;
  for (auto& col : out.lambda)
    for (double& x : col) x *= f;
  return out;
}

}  // namespace

TEST(Barrier, Examples) {
  const BarrierParams p{-1.0, -1.0, 1.0};
  EXPECT_DOUBLE_EQ(barrier_s(0.0, p), -2.0);
  EXPECT_NEAR(barrier_s(50.0, p), -1.0, 1e-12);
  EXPECT_NEAR(barrier_s(std::log(2.0), p), -4.0 / 3.0, 1e-15);
  EXPECT_NEAR(barrier_s(std::log(2.0), p), barrier_extended(std::log(2.0), -1.0, -1.0), 1e-15);
  EXPECT_NEAR(barrier_s_oracle(std::log(2.0), p), -4.0 / 3.0, 1e-12);
  const BarrierParams q{-3.0, -5.0, 1.0};
  EXPECT_NEAR(barrier_s(50.0 / 3.0, q), -3.0, 1e-12);
}

TEST(Barrier, OracleGrid) {
  for (double r : {-0.5, -1.0, -2.0, -8.9}) {
    for (double ratio : {1.0, 0.9, 0.5, 0.1, 0.0108}) {
      const BarrierParams p{r, r / (2 * ratio), 1.0};
      for (double frac : {0.0, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
        const double t = frac / std::abs(r);
        const double closed = barrier_s(t, p);
        EXPECT_NEAR(closed, barrier_s_oracle(t, p, 20000), 1e-8) << r << ' ' << ratio << ' ' << t;
        EXPECT_NEAR(closed, barrier_extended(t, p.r, p.sigma), 1e-12 * std::abs(closed));
      }
    }
  }
}

TEST(Barrier, ConstantSolutionAtHalfMean) {
  const BarrierParams p{-2.0, -1.0, 1.0};
  for (double t : {0.0, 0.3, 7.0}) {
    EXPECT_DOUBLE_EQ(barrier_s(t, p), -2.0);
    EXPECT_NEAR(barrier_s_oracle(t, p, 1000), -2.0, 1e-15);
  }
  EXPECT_DOUBLE_EQ(barrier_s_oracle(0.0, {-1.0, -3.0, 1.0}, 1000), -6.0);
}

TEST(Barrier, MonotoneInTimeAndSigma) {
  const double r = -1.5;
  for (double sigma : {-0.75, -1.0, -4.0, -40.0}) {
    double prev = -1e300;
    for (int k = 0; k <= 200; ++k) {
      const double s = barrier_s(0.05 * k, {r, sigma, 1.0});
      EXPECT_GE(s, prev);
      EXPECT_GE(s, 2 * sigma - 1e-12);
      EXPECT_LE(s, r + 1e-12);
      prev = s;
    }
  }
  for (double t : {0.0, 0.2, 2.0}) {
    EXPECT_LE(barrier_s(t, {r, -10.0, 1.0}), barrier_s(t, {r, -2.0, 1.0}));
  }
}

TEST(Barrier, ParameterValidation) {
  EXPECT_THROW((BarrierParams{1.0, -1.0, 1.0}.validate()), PreconditionError);
  EXPECT_THROW((BarrierParams{-1.0, -0.4, 1.0}.validate()), PreconditionError);
  EXPECT_NO_THROW((BarrierParams{-1.0, -0.5, 1.0}.validate()));
  EXPECT_THROW(barrier_s_oracle(1.0, {-1.0, -1.0, 1.0}, 0), PreconditionError);
}

TEST(EigenBoundFunction, Examples) {
  const BarrierParams p{-1.0, -1.0, 0.3};
  EXPECT_DOUBLE_EQ(lower_bound_B(0.0, p), 0.3);
  EXPECT_NEAR(lower_bound_B(std::log(2.0), p), 0.2, 1e-15);
  EXPECT_NEAR(lower_bound_B(60.0, p), 0.3 * 0.5, 1e-15);
}

TEST(EigenBoundFunction, DenominatorIdentityAndDirection) {
  for (double ratio : {1.0, 0.5, 0.0108}) {
    const BarrierParams p{-2.0, -2.0 / (2 * ratio), 1.7};
    double prev = lower_bound_B(0.0, p);
    for (int k = 0; k <= 100; ++k) {
      const double t = 0.03 * k;
      const double b = lower_bound_B(t, p);
      EXPECT_NEAR(b * (1 - (1 - ratio) * std::exp(p.r * t)), p.lambda0 * ratio, 1e-14);
      // B falls from lambda0 toward lambda0 * r/(2 sigma).
      EXPECT_LE(b, prev + 1e-15);
      EXPECT_GE(b, p.lambda0 * ratio - 1e-15);
      prev = b;
    }
  }
}

TEST(Verdicts, ConstantCurvatureHoldsWithEquality) {
  const TraceSeries s = constant_series(-1.0, 0.8);
  const BarrierVerdict mp = check_max_principle(s);
  EXPECT_TRUE(mp.ok);
  EXPECT_GE(mp.worst_margin, 0.0);
  const TheoremReport rep = check_theorems(s);
  EXPECT_TRUE(rep.all_ok(true));
  EXPECT_TRUE(rep.sigma_admissible);
  for (const auto& r : rep.indices) {
    EXPECT_TRUE(r.theorem1_ok && r.theorem2a_ok && r.theorem2b_ok && r.theorem2b_consistent && r.theorem2c_ok);
    EXPECT_NEAR(r.margin_t1, 0.0, 1e-15);
    EXPECT_NEAR(r.margin_t2c, 0.0, 1e-15);
    EXPECT_TRUE(r.eigen_bound.ok);
    EXPECT_NEAR(r.eigen_bound.worst_margin, 0.0, 1e-15);
  }
}

TEST(Verdicts, ViolationsAreDetected) {
  TraceSeries s = constant_series(-1.0, 0.8);
  s.lambda[1].back() = 0.5 * s.lambda[1].front();  // lambda_2 collapses
  const TheoremReport rep = check_theorems(s);
  EXPECT_FALSE(rep.indices[1].eigen_bound.ok);
  EXPECT_FALSE(rep.all_ok());
  EXPECT_TRUE(rep.equivalence_ok);
  EXPECT_TRUE(rep.indices[0].theorem2c_ok);

  s = constant_series(-1.0, 0.8);
  s.scalar_min[1] = -5.0;
  EXPECT_FALSE(check_max_principle(s).ok);
  EXPECT_NEAR(check_max_principle(s).worst_margin, -5.0 - barrier_s(0.5, {-1.0, -0.5, 1.0}), 1e-14);
}

TEST(Verdicts, LooserSigmaKeepsTheorem2a) {
  TraceSeries s = constant_series(-1.0, 0.8);
  s.scalar_min[0] = -3.0;  // kappa_g = -1.5
  s.sigma = -1.5;
  s.lambda[0] = {1.4, 1.0, 0.8};
  const TheoremReport tight = check_theorems(s);
  const TheoremReport loose = check_theorems(s, -4.0);
  EXPECT_TRUE(tight.indices[0].theorem2a_ok);
  EXPECT_TRUE(loose.indices[0].theorem2a_ok);
  EXPECT_GT(loose.indices[0].rhs_t2a, tight.indices[0].rhs_t2a);
  EXPECT_TRUE(loose.sigma_overridden);
  EXPECT_TRUE(loose.sigma_admissible);
  EXPECT_FALSE(check_theorems(s, -1.0).sigma_admissible);
}

TEST(Verdicts, TheoremOneAndTwoCAgree) {
  TraceSeries s = constant_series(-1.0, 0.8);
  s.scalar_min[0] = -3.0;
  s.sigma = -1.5;
  for (double lg : {0.2, 2.39, 2.4, 2.4023, 2.4025, 3.0}) {
    s.lambda[0][0] = lg;
    const TheoremReport rep = check_theorems(s);
    EXPECT_EQ(rep.indices[0].theorem1_ok, rep.indices[0].theorem2c_ok) << lg;
    EXPECT_TRUE(rep.equivalence_ok);
  }
}

TEST(Verdicts, AmbiguousTrackIsUnreliable) {
  TraceSeries s = constant_series(-1.0, 0.8);
  s.ambiguous[2] = true;
  const TheoremReport rep = check_theorems(s);
  EXPECT_FALSE(rep.indices[2].reliable);
  EXPECT_FALSE(rep.indices[2].eigen_bound.reliable);
  EXPECT_FALSE(rep.all_ok());
}

TEST(Verdicts, RefusesUnconvergedTrace) {
  TraceSeries s = constant_series(-1.0, 0.8);
  s.converged = false;
  EXPECT_THROW(check_theorems(s), PreconditionError);
  EXPECT_THROW(check_eigen_bound(s, 0), PreconditionError);
}

TEST(Verdicts, ScaleCovariance) {
  const FlowTrace trace = run_flow(generate_genus2({2, 0.05, 3}), testing_support::quick_config());
  const TraceSeries s = summarize(trace, 1e-3);
  const TheoremReport a = check_theorems(s);
  for (double rho : {0.5, 3.0}) {
    const TheoremReport b = check_theorems(scaled(s, rho));
    EXPECT_EQ(a.all_ok(true), b.all_ok(true));
    EXPECT_EQ(a.max_principle.ok, b.max_principle.ok);
    EXPECT_NEAR(a.r / (2 * a.sigma), b.r / (2 * b.sigma), 1e-14);
    for (std::size_t i = 0; i < a.indices.size(); ++i) {
      const auto& x = a.indices[i];
      const auto& y = b.indices[i];
      EXPECT_EQ(x.theorem1_ok, y.theorem1_ok);
      EXPECT_EQ(x.theorem2a_ok, y.theorem2a_ok);
      EXPECT_EQ(x.theorem2b_ok, y.theorem2b_ok);
      EXPECT_EQ(x.theorem2c_ok, y.theorem2c_ok);
      EXPECT_EQ(x.eigen_bound.ok, y.eigen_bound.ok);
      EXPECT_NEAR(x.lambda_g / a.kappa_g, y.lambda_g / b.kappa_g, 1e-12 * std::abs(x.lambda_g / a.kappa_g));
    }
  }
}

TEST(Verdicts, ScaledMeshRescalesSpectrumAndCurvature) {
  const IntrinsicMesh m = generate_genus2({2, 0.05, 3});
  std::vector<double> l = m.reference_lengths();
  for (double& x : l) x *= 2.0;
  const FlowConfig c = testing_support::quick_config();
  const FlowTrace a = run_flow(m, c);
  const FlowTrace b = run_flow(m.with_lengths(l), c);
  EXPECT_NEAR(b.r * 4, a.r, 1e-12 * std::abs(a.r));
  EXPECT_NEAR(b.sigma * 4, a.sigma, 1e-12 * std::abs(a.sigma));
  for (int i = 1; i <= 3; ++i) {
    EXPECT_NEAR(b.initial().spectrum->eigenvalues[i] * 4, a.initial().spectrum->eigenvalues[i],
                1e-9 * a.initial().spectrum->eigenvalues[i]);
  }
}
