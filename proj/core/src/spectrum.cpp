#include "ricci/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <tuple>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "ricci/error.hpp"

namespace ricci {

namespace {

// M-orthonormalizes the columns of Y in place (two passes of modified Gram-Schmidt).
void mass_orthonormalize(Eigen::MatrixXd& Y, const Eigen::VectorXd& mass) {
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double proj = Y.col(i).dot(mass.cwiseProduct(Y.col(j)));
        Y.col(j) -= proj * Y.col(i);
      }
    }
    const double norm = std::sqrt(Y.col(j).dot(mass.cwiseProduct(Y.col(j))));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw SolverError("subspace iteration lost rank at column " + std::to_string(j));
    }
    Y.col(j) /= norm;
  }
}

void normalize_signs(Eigen::MatrixXd& X) {
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    Eigen::Index arg = 0;
    X.col(j).cwiseAbs().maxCoeff(&arg);
    if (X(arg, j) < 0.0) X.col(j) = -X.col(j);
  }
}

double mass_overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& mass) {
  const double ab = a.dot(mass.cwiseProduct(b));
  const double aa = a.dot(mass.cwiseProduct(a));
  const double bb = b.dot(mass.cwiseProduct(b));
  return std::min(1.0, std::abs(ab) / std::sqrt(aa * bb));
}

}  // namespace

LaplaceOperators assemble_operators(const IntrinsicMesh& mesh, const MetricState& state) {
  return assemble_operators(mesh, effective_lengths(mesh, state));
}

LaplaceOperators assemble_operators(const IntrinsicMesh& mesh, std::span<const double> lengths) {
  const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
  const std::vector<double> w = cotan_weights(mesh, lengths);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * w.size());
  for (std::size_t e = 0; e < w.size(); ++e) {
    const auto [i, j] = mesh.edge(e).vertices;
    if (i == j) continue;  // a loop contributes w (u_i - u_i)^2 = 0
    triplets.emplace_back(i, i, w[e]);
    triplets.emplace_back(j, j, w[e]);
    triplets.emplace_back(i, j, -w[e]);
    triplets.emplace_back(j, i, -w[e]);
  }
  LaplaceOperators ops;
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  ops.stiffness.makeCompressed();

  ops.mass = Eigen::VectorXd::Zero(n);
  for (const Face& face : mesh.faces()) {
    const double area = triangle_area(lengths[face.edges[0]], lengths[face.edges[1]], lengths[face.edges[2]]);
    for (Index v : face.vertices) ops.mass[v] += area / 3.0;
  }
  return ops;
}

double relative_residual(const LaplaceOperators& ops, const SpectrumSlice& slice, int i) {
  const Eigen::VectorXd x = slice.eigenvectors.col(i);
  const Eigen::VectorXd mx = ops.mass.cwiseProduct(x);
  const double lambda = slice.eigenvalues[i];
  const double r = (ops.stiffness * x - lambda * mx).norm();
  return r / (mx.norm() * std::max(std::abs(lambda), 1.0));
}

SpectrumSlice smallest_eigenpairs(const LaplaceOperators& ops, int k, const EigenSolverOptions& options,
                                  const SpectrumSlice* warm_start) {
  const Eigen::Index n = ops.stiffness.rows();
  const Eigen::Index wanted = k + 1;
  if (k < 1 || wanted > n) throw PreconditionError("eigen count must satisfy 1 <= k < vertex count");
  const Eigen::Index block = std::min<Eigen::Index>(n, wanted + std::max<Eigen::Index>(options.guard_vectors, wanted));

  // Shift makes L + shift*M positive definite; scaled to the operator's spectrum.
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale += ops.stiffness.coeff(i, i) / ops.mass[i];
  const double shift = 1e-3 * scale / static_cast<double>(n);

  Eigen::SparseMatrix<double> shifted = ops.stiffness;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += shift * ops.mass[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
  if (factor.info() != Eigen::Success) throw SolverError("factorization of L + shift*M failed");

  Eigen::MatrixXd X(n, block);
  std::mt19937_64 rng(options.seed);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  }
  if (warm_start != nullptr && warm_start->eigenvectors.rows() == n) {
    const Eigen::Index cols = std::min<Eigen::Index>(block, warm_start->eigenvectors.cols());
    X.leftCols(cols) = warm_start->eigenvectors.leftCols(cols);
  }
  mass_orthonormalize(X, ops.mass);

  SpectrumSlice slice;
  Eigen::VectorXd theta;
  double worst = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::MatrixXd Y = factor.solve(ops.mass.asDiagonal() * X);
    mass_orthonormalize(Y, ops.mass);
    Eigen::MatrixXd H = Y.transpose() * (ops.stiffness * Y);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(H);
    X = Y * ritz.eigenvectors();
    theta = ritz.eigenvalues();

    worst = 0.0;
    for (Eigen::Index j = 0; j < wanted; ++j) {
      const Eigen::VectorXd mx = ops.mass.cwiseProduct(X.col(j));
      const double r = (ops.stiffness * X.col(j) - theta[j] * mx).norm() /
                       (mx.norm() * std::max(std::abs(theta[j]), 1.0));
      worst = std::max(worst, r);
    }
    if (worst <= options.residual_tol) {
      slice.iterations = it;
      slice.eigenvalues = theta.head(wanted);
      slice.eigenvectors = X.leftCols(wanted);
      normalize_signs(slice.eigenvectors);
      slice.mass = ops.mass;
      return slice;
    }
  }
  throw SolverError("eigensolver did not converge in " + std::to_string(options.max_iterations) +
                    " iterations (worst relative residual " + std::to_string(worst) + ")");
}

EigenPairing track_eigenpairs(const SpectrumSlice& prev, const SpectrumSlice& next) {
  const int np = prev.count();
  const int nn = next.count();
  std::vector<std::tuple<double, int, int>> candidates;
  candidates.reserve(static_cast<std::size_t>(np * nn));
  for (int p = 0; p < np; ++p) {
    for (int q = 0; q < nn; ++q) {
      candidates.emplace_back(mass_overlap(prev.eigenvectors.col(p), next.eigenvectors.col(q), next.mass), p, q);
    }
  }
  // Descending overlap; ties broken toward the lower indices.
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });
  EigenPairing pairing;
  pairing.next_index.assign(static_cast<std::size_t>(np), -1);
  pairing.quality.assign(static_cast<std::size_t>(np), 0.0);
  std::vector<char> taken(static_cast<std::size_t>(nn), 0);
  for (const auto& [overlap, p, q] : candidates) {
    if (pairing.next_index[p] >= 0 || taken[q]) continue;
    pairing.next_index[p] = q;
    pairing.quality[p] = overlap;
    taken[q] = 1;
  }
  return pairing;
}

bool EigenTrack::ambiguous() const {
  return std::any_of(pairing_quality.begin(), pairing_quality.end(),
                     [this](double q) { return q < overlap_floor; });
}

EigenTracker::EigenTracker(int count, double overlap_floor) : count_(count), floor_(overlap_floor) {}

void EigenTracker::push(const SpectrumSlice& slice) {
  if (slice.count() <= count_) throw PreconditionError("slice holds too few eigenpairs to track");
  if (pushed_ == 0) {
    tracks_.resize(static_cast<std::size_t>(count_));
    for (int i = 1; i <= count_; ++i) {
      EigenTrack& track = tracks_[static_cast<std::size_t>(i - 1)];
      track.index = i;
      track.overlap_floor = floor_;
      track.samples.push_back({slice.t, slice.eigenvalues[i], 0, i});
    }
  } else {
    const EigenPairing pairing = track_eigenpairs(*last_, slice);
    for (EigenTrack& track : tracks_) {
      const int col = track.samples.back().column;
      int next = pairing.next_index[static_cast<std::size_t>(col)];
      double quality = pairing.quality[static_cast<std::size_t>(col)];
      if (next < 0) {
        next = col;
        quality = 0.0;
      }
      track.samples.push_back({slice.t, slice.eigenvalues[next], pushed_, next});
      track.pairing_quality.push_back(quality);
    }
  }
  last_ = std::make_shared<SpectrumSlice>(slice);
  ++pushed_;
}

double eigenvalue_time_derivative(const CurvatureField& curvature, const SpectrumSlice& slice, int i) {
  const Eigen::VectorXd u = slice.eigenvectors.col(i);
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double w = u[j] * u[j] * curvature.area[static_cast<std::size_t>(j)];
    num += (curvature.scalar[static_cast<std::size_t>(j)] - curvature.average_scalar) * w;
    den += w;
  }
  return slice.eigenvalues[i] * num / den;
}

}  // namespace ricci
