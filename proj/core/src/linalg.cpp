#include "dcki/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcki::linalg {

double rank_tolerance(Index rows, Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max *
         std::numeric_limits<double>::epsilon();
}

void apply_sign_convention(Matrix& columns) {
  for (Index j = 0; j < columns.cols(); ++j) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < columns.rows(); ++i) {
      const double a = std::abs(columns(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (columns.rows() > 0 && columns(best, j) < 0) columns.col(j) *= -1.0;
  }
}

Matrix symmetrize(const Matrix& A) { return 0.5 * (A + A.transpose()); }

SymmetricEigen symmetric_eigen(const Matrix& A) {
  require(A.rows() == A.cols(), ErrorCode::kShapeMismatch,
          "eigendecomposition needs a square matrix");
  require(A.allFinite(), ErrorCode::kNonFinite, "matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(A));
  require(solver.info() == Eigen::Success, ErrorCode::kNonFinite,
          "symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ThinSvd truncated_svd(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double tol = rank_tolerance(A.rows(), A.cols(), smax);
  Index rank = 0;
  while (rank < s.size() && s(rank) > tol) ++rank;
  return {svd.matrixU().leftCols(rank), s.head(rank),
          svd.matrixV().leftCols(rank), s};
}

Matrix pinv(const Matrix& A) {
  const ThinSvd svd = truncated_svd(A);
  return svd.V * svd.singular_values.cwiseInverse().asDiagonal() *
         svd.U.transpose();
}

GeneralizedEigen generalized_eigen_smallest(const Matrix& M, const Matrix& C,
                                            Index count) {
  const Index n = M.rows();
  require(M.cols() == n && C.rows() == n && C.cols() == n,
          ErrorCode::kShapeMismatch, "generalized eigenproblem shape mismatch");
  require(count >= 0 && count <= n, ErrorCode::kDimensionMismatch,
          "requested more eigenvectors than the problem size");
  Eigen::LLT<Matrix> llt(symmetrize(C));
  require(llt.info() == Eigen::Success, ErrorCode::kIndefinite,
          "constraint matrix is not positive definite");
  const auto L = llt.matrixL();
  // W = L^-1 M L^-T
  Matrix W = L.solve(symmetrize(M));
  W = L.solve(W.transpose().eval());
  const SymmetricEigen eig = symmetric_eigen(W);
  Matrix U = llt.matrixU().solve(eig.vectors.leftCols(count));
  apply_sign_convention(U);
  return {eig.values, U};
}

bool has_degenerate_gap(const Vector& ascending, Index count, double rel_tol) {
  if (count <= 0 || count >= ascending.size()) return false;
  const double scale = ascending.cwiseAbs().maxCoeff();
  return std::abs(ascending(count) - ascending(count - 1)) < rel_tol * scale;
}

double smallest_eigenvalue(const Matrix& A) {
  return symmetric_eigen(A).values(0);
}

}  // namespace dcki::linalg
