#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ricci/error.hpp"
#include "ricci/flow.hpp"
#include "ricci/generator.hpp"
#include "ricci/spectrum.hpp"
#include "support.hpp"

using namespace ricci;

namespace {

Eigen::VectorXd dense_oracle(const LaplaceOperators& ops) {
  const Eigen::MatrixXd L(ops.stiffness);
  const Eigen::MatrixXd M = ops.mass.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(L, M);
  return es.eigenvalues();
}

SpectrumSlice synthetic_slice(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& values) {
  SpectrumSlice s;
  s.eigenvalues = values;
  s.eigenvectors = vectors;
  s.mass = Eigen::VectorXd::Ones(vectors.rows());
  return s;
}

}  // namespace

TEST(Operators, RowSumsAndMassTrace) {
  const IntrinsicMesh m = generate_genus2({2, 0.05, 3});
  const MetricState s = MetricState::zero(m);
  const LaplaceOperators ops = assemble_operators(m, s);
  const Eigen::MatrixXd L(ops.stiffness);
  EXPECT_LT((L - L.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  for (Eigen::Index i = 0; i < L.rows(); ++i) EXPECT_NEAR(L.row(i).sum(), 0.0, 1e-12);
  EXPECT_NEAR(ops.mass.sum(), curvature_field(m, s).volume, 1e-12);
  EXPECT_GT(ops.mass.minCoeff(), 0.0);
}

TEST(Spectrum, TetrahedronDenseOracle) {
  const IntrinsicMesh m = testing_support::unit_tetrahedron();
  const LaplaceOperators ops = assemble_operators(m, MetricState::zero(m));
  const Eigen::VectorXd dense = dense_oracle(ops);
  EXPECT_NEAR(dense[0], 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(dense[i], 16.0 / 3.0, 1e-12);
}

TEST(Spectrum, TetrahedronIterative) {
  const IntrinsicMesh m = testing_support::unit_tetrahedron();
  const LaplaceOperators ops = assemble_operators(m, MetricState::zero(m));
  const SpectrumSlice s = smallest_eigenpairs(ops, 3);
  ASSERT_EQ(s.count(), 4);
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(s.eigenvalues[i], 16.0 / 3.0, 1e-9);
}

TEST(Spectrum, GenusTwoMatchesDenseOracle) {
  for (int rounds : {2, 3}) {
    const IntrinsicMesh m = generate_genus2({rounds, 0.05, 7});
    const LaplaceOperators ops = assemble_operators(m, MetricState::zero(m));
    const Eigen::VectorXd dense = dense_oracle(ops);
    const SpectrumSlice s = smallest_eigenpairs(ops, 5);
    for (int i = 1; i <= 5; ++i) {
      EXPECT_NEAR(s.eigenvalues[i] / dense[i], 1.0, 1e-8) << "rounds " << rounds << " index " << i;
    }
  }
}

TEST(Spectrum, SliceInvariants) {
  const IntrinsicMesh m = generate_genus2({3, 0.05, 2});
  const LaplaceOperators ops = assemble_operators(m, MetricState::zero(m));
  const SpectrumSlice s = smallest_eigenpairs(ops, 6);
  // kernel
  EXPECT_LE(std::abs(s.eigenvalues[0]), 1e-9 * s.eigenvalues[1]);
  const Eigen::VectorXd c = s.eigenvectors.col(0);
  EXPECT_LT((c.array() - c.mean()).abs().maxCoeff(), 1e-8 * c.cwiseAbs().maxCoeff());
  EXPECT_GT(s.eigenvalues[1], 1e-3);
  // ordering, orthonormality, residuals, Rayleigh quotients
  const Eigen::MatrixXd gram = s.eigenvectors.transpose() * ops.mass.asDiagonal() * s.eigenvectors;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-9);
  for (int i = 0; i < s.count(); ++i) {
    if (i > 0) EXPECT_LE(s.eigenvalues[i - 1], s.eigenvalues[i]);
    EXPECT_LE(relative_residual(ops, s, i), 1e-8);
    const Eigen::VectorXd x = s.eigenvectors.col(i);
    const double rq = x.dot(ops.stiffness * x) / x.dot(ops.mass.asDiagonal() * x);
    if (i > 0) EXPECT_NEAR(rq / s.eigenvalues[i], 1.0, 1e-9);
  }
}

TEST(Spectrum, WarmStartAgreesAndIsDeterministic) {
  const IntrinsicMesh m = generate_genus2({3, 0.05, 2});
  const LaplaceOperators ops = assemble_operators(m, MetricState::zero(m));
  const SpectrumSlice cold = smallest_eigenpairs(ops, 5);
  const SpectrumSlice again = smallest_eigenpairs(ops, 5);
  EXPECT_EQ(cold.eigenvalues, again.eigenvalues);
  EXPECT_EQ(cold.eigenvectors, again.eigenvectors);
  const SpectrumSlice warm = smallest_eigenpairs(ops, 5, {}, &cold);
  for (int i = 1; i <= 5; ++i) EXPECT_NEAR(warm.eigenvalues[i] / cold.eigenvalues[i], 1.0, 1e-10);
  EXPECT_LE(warm.iterations, cold.iterations);
}

TEST(Spectrum, IterationBudgetExhaustion) {
  const IntrinsicMesh m = generate_genus2({3, 0.05, 2});
  const LaplaceOperators ops = assemble_operators(m, MetricState::zero(m));
  EigenSolverOptions opts;
  opts.max_iterations = 1;
  EXPECT_THROW(smallest_eigenpairs(ops, 5, opts), SolverError);
}

TEST(Tracking, IdenticalSlicesPairIdentically) {
  const IntrinsicMesh m = generate_genus2({2, 0.05, 2});
  const SpectrumSlice s = smallest_eigenpairs(assemble_operators(m, MetricState::zero(m)), 5);
  const EigenPairing p = track_eigenpairs(s, s);
  for (int i = 0; i < s.count(); ++i) {
    EXPECT_EQ(p.next_index[i], i);
    EXPECT_NEAR(p.quality[i], 1.0, 1e-12);
  }
}

TEST(Tracking, SignFlipsAreIgnored) {
  const IntrinsicMesh m = generate_genus2({2, 0.05, 2});
  const SpectrumSlice s = smallest_eigenpairs(assemble_operators(m, MetricState::zero(m)), 5);
  SpectrumSlice flipped = s;
  flipped.eigenvectors.col(2) *= -1.0;
  flipped.eigenvectors.col(4) *= -1.0;
  const EigenPairing p = track_eigenpairs(s, flipped);
  for (int i = 0; i < s.count(); ++i) {
    EXPECT_EQ(p.next_index[i], i);
    EXPECT_NEAR(p.quality[i], 1.0, 1e-12);
  }
}

TEST(Tracking, SyntheticCrossingIsTransposition) {
  // Modes a and b near-degenerate; between slices their order swaps and each
  // rotates slightly (angle 0.1) inside their shared plane.
  const double th = 0.1;
  Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd next(3, 3);
  next.col(0) = prev.col(0);
  next.col(1) = -std::sin(th) * prev.col(1) + std::cos(th) * prev.col(2);  // b first
  next.col(2) = std::cos(th) * prev.col(1) + std::sin(th) * prev.col(2);   // then a
  const EigenPairing p =
      track_eigenpairs(synthetic_slice(prev, Eigen::Vector3d(0, 1.0, 1.001)),
                       synthetic_slice(next, Eigen::Vector3d(0, 0.999, 1.0)));
  EXPECT_EQ(p.next_index, (std::vector<int>{0, 2, 1}));
  EXPECT_NEAR(p.quality[1], std::cos(th), 1e-14);
  EXPECT_NEAR(p.quality[2], std::cos(th), 1e-14);
}

TEST(Tracking, LowOverlapMarksTrackAmbiguous) {
  // Columns 1..4 are mixed by I - ones/2, so every overlap is exactly 1/2.
  Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(6, 6);
  Eigen::MatrixXd next = prev;
  next.block(1, 1, 4, 4) = Eigen::MatrixXd::Identity(4, 4) - 0.5 * Eigen::MatrixXd::Ones(4, 4);
  Eigen::VectorXd values(6);
  values << 0, 1, 2, 3, 4, 5;
  EigenTracker tracker(2, 0.6);
  tracker.push(synthetic_slice(prev, values));
  tracker.push(synthetic_slice(next, values));
  ASSERT_EQ(tracker.tracks().size(), 2u);
  for (const EigenTrack& track : tracker.tracks()) {
    EXPECT_TRUE(track.ambiguous());
    EXPECT_FALSE(track.transition_ok(1));
    EXPECT_NEAR(track.pairing_quality[0], 0.5, 1e-15);
    EXPECT_EQ(track.samples.size(), 2u);
  }
}

TEST(Tracking, TracksFollowPermutation) {
  Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(4, 4);
  Eigen::MatrixXd next(4, 4);
  next << 1, 0, 0, 0,  //
      0, 0, 1, 0,      //
      0, 1, 0, 0,      //
      0, 0, 0, 1;
  EigenTracker tracker(2, 0.5);
  tracker.push(synthetic_slice(prev, Eigen::Vector4d(0, 1, 2, 3)));
  tracker.push(synthetic_slice(next, Eigen::Vector4d(0, 1.5, 1.6, 3)));
  const auto& tracks = tracker.tracks();
  EXPECT_EQ(tracks[0].samples[1].column, 2);
  EXPECT_DOUBLE_EQ(tracks[0].samples[1].lambda, 1.6);
  EXPECT_EQ(tracks[1].samples[1].column, 1);
  EXPECT_FALSE(tracks[0].ambiguous());
}

TEST(EigenDerivative, VanishesAtConstantCurvatureAndOnKernel) {
  const IntrinsicMesh m = generate_genus2({2, 0.05, 2});
  const MetricState st = MetricState::zero(m);
  const SpectrumSlice s = smallest_eigenpairs(assemble_operators(m, st), 3);
  CurvatureField c = curvature_field(m, st);
  EXPECT_NEAR(eigenvalue_time_derivative(c, s, 0), 0.0, 1e-9);
  std::fill(c.scalar.begin(), c.scalar.end(), c.average_scalar);
  for (int i = 1; i <= 3; ++i) EXPECT_NEAR(eigenvalue_time_derivative(c, s, i), 0.0, 1e-12);
}

TEST(EigenDerivative, MatchesHandQuadrature) {
  SpectrumSlice s = synthetic_slice(Eigen::MatrixXd::Identity(3, 3), Eigen::Vector3d(0, 2, 3));
  s.eigenvectors.col(1) = Eigen::Vector3d(1, 2, 0);
  CurvatureField c;
  c.area = {1.0, 0.5, 2.0};
  c.scalar = {-1.0, -3.0, -2.0};
  c.average_scalar = -2.0;
  // lambda * sum (R - r) u^2 A / sum u^2 A = 2 * (1*1*1 + (-1)*4*0.5) / (1 + 2) = -2/3
  EXPECT_NEAR(eigenvalue_time_derivative(c, s, 1), -2.0 / 3.0, 1e-15);
}
