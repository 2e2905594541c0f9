#pragma once

#include "dcki/common.hpp"

namespace dcki::linalg {

/// Singular values below max(rows, cols) * sigma_max * 2^-52 count as zero.
double rank_tolerance(Index rows, Index cols, double sigma_max);

/// Flip each column so its largest-magnitude entry is positive. Exact
/// magnitude ties go to the lowest row index.
void apply_sign_convention(Matrix& columns);

Matrix symmetrize(const Matrix& A);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns match `values`
};

/// Eigendecomposition of (A + A^T)/2.
SymmetricEigen symmetric_eigen(const Matrix& A);

struct ThinSvd {
  Matrix U;  // rows x rank
  Vector singular_values;  // descending, all retained (> tolerance)
  Matrix V;  // cols x rank
  Vector all_singular_values;
};

/// Thin SVD truncated at rank_tolerance.
ThinSvd truncated_svd(const Matrix& A);

/// Moore-Penrose pseudoinverse with the module rank tolerance.
Matrix pinv(const Matrix& A);

/// Solves M u = g C u for the `count` smallest g by factoring C = L L^T
/// and diagonalising L^-1 M L^-T. Returned vectors satisfy U^T C U = I.
struct GeneralizedEigen {
  Vector values;  // all generalized eigenvalues, ascending
  Matrix vectors; // n x count, C-orthonormal, sign convention applied
};
GeneralizedEigen generalized_eigen_smallest(const Matrix& M, const Matrix& C,
                                            Index count);

/// True when the count-th and (count+1)-th ascending values are within
/// rel_tol * max|value| of each other.
bool has_degenerate_gap(const Vector& ascending, Index count,
                        double rel_tol = 1e-10);

double smallest_eigenvalue(const Matrix& A);

}  // namespace dcki::linalg
