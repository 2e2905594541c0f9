#pragma once

#include <vector>

#include "dcki/common.hpp"

namespace dcki {

/// Linear kernel integration (LKI): g_k(x) = x * G_k with a shared
/// orthonormal target Z.
struct LinearIntegrationModel {
  Matrix Z_star;             // n_a x d_hat, Z^T Z = I
  std::vector<Matrix> G;     // G_k: d_tilde(k) x d_hat
  std::vector<Index> ranks;  // rank of each party's anchor block
  Vector singular_values;    // of the stacked bases W_Q, descending
  double objective_value = 0.0;
  /// The d_hat-th and (d_hat+1)-th singular values of W_Q coincide, so the
  /// optimal subspace is not unique.
  bool non_unique_subspace = false;

  [[nodiscard]] Index parties() const { return static_cast<Index>(G.size()); }
  [[nodiscard]] Index d_hat() const { return Z_star.cols(); }
};

/// Globally optimal solution of
///   min sum_k |A_k G_k - Z|_F^2  s.t.  Z^T Z = I
/// with Z the top-d_hat left singular vectors of [Q_1, ..., Q_K] (Q_k an
/// orthonormal basis of col(A_k)) and G_k = pinv(A_k) Z.
LinearIntegrationModel fit_lki(const std::vector<Matrix>& anchors_tilde,
                               Index d_hat);

Matrix apply_linear(const LinearIntegrationModel& model, Index party,
                    const Matrix& X_tilde);

/// sum_k |A_k G_k - Z|_F^2
double lki_objective(const std::vector<Matrix>& anchors_tilde,
                     const std::vector<Matrix>& G, const Matrix& Z);

}  // namespace dcki
