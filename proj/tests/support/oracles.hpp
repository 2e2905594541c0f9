#pragma once

// Brute-force reference computations for the tests. Nothing here calls into
// dcki's linear algebra; decompositions go straight to Eigen.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "dcki/common.hpp"
#include "dcki/random.hpp"

namespace oracle {

using dcki::Index;
using dcki::Matrix;
using dcki::Vector;

inline Matrix gaussian(Index rows, Index cols, dcki::CounterRng& rng) {
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  return M;
}

// Orthonormal columns from Householder QR of a Gaussian draw.
inline Matrix orthonormal(Index rows, Index cols, dcki::CounterRng& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rows, cols, rng));
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

// Least-squares solution of A X = B with minimum norm.
inline Matrix lstsq(const Matrix& A, const Matrix& B) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  cod.setThreshold(1e-12);
  return cod.solve(B);
}

inline Matrix projector(const Matrix& A) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  cod.setThreshold(1e-12);
  return A * cod.pseudoInverse();
}

inline Vector eigenvalues(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double sum_smallest(const Matrix& S, Index count) {
  return eigenvalues(S).head(count).sum();
}

inline double sum_largest(const Matrix& S, Index count) {
  return eigenvalues(S).tail(count).sum();
}

// Symmetric inverse square root of an SPD matrix.
inline Matrix inv_sqrt(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

inline Matrix rbf(const Matrix& A, const Matrix& B, double gamma) {
  Matrix K(A.rows(), B.rows());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < B.rows(); ++j)
      K(i, j) = std::exp(-gamma * (A.row(i) - B.row(j)).squaredNorm());
  return K;
}

inline Matrix random_psd(Index n, Index rank, dcki::CounterRng& rng) {
  const Matrix R = gaussian(n, rank, rng);
  return R * R.transpose() / static_cast<double>(rank);
}

// Symmetric nonnegative weights with zero diagonal, about half the pairs
// connected.
inline Matrix random_weights(Index n, dcki::CounterRng& rng) {
  Matrix W = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (rng.uniform01() < 0.5) W(i, j) = W(j, i) = rng.uniform01();
  return W;
}

inline Matrix graph_laplacian(const Matrix& W) {
  Matrix L = -W;
  for (Index i = 0; i < W.rows(); ++i) L(i, i) += W.row(i).sum();
  return L;
}

// 1/2 sum_ij w_ij |z_i - z_j|^2
inline double pairwise_energy(const Matrix& W, const Matrix& Z) {
  double e = 0.0;
  for (Index i = 0; i < W.rows(); ++i)
    for (Index j = 0; j < W.cols(); ++j) e += W(i, j) * (Z.row(i) - Z.row(j)).squaredNorm();
  return 0.5 * e;
}

// Orthonormal basis of the mean-zero subspace, via QR of (I - 11^T/n).
inline Matrix mean_zero_basis(Index n) {
  const Matrix P = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::SelfAdjointEigenSolver<Matrix> es(P);
  return es.eigenvectors().rightCols(n - 1);
}

inline double rel_frobenius(const Matrix& A, const Matrix& B) {
  return (A - B).norm() / std::max(B.norm(), 1e-300);
}

// Does span(A) equal span(B)? Compares orthogonal projectors.
inline double subspace_distance(const Matrix& A, const Matrix& B) {
  return (projector(A) - projector(B)).norm();
}

}  // namespace oracle
