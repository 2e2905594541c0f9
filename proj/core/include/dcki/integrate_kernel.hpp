#pragma once

#include <vector>

#include "dcki/common.hpp"
#include "dcki/graphs.hpp"

namespace dcki {

enum class KernelKind { kRbf };

/// kappa(x, x') = exp(-gamma |x - x'|^2), shared by all parties.
struct KernelSpec {
  KernelKind kind = KernelKind::kRbf;
  double gamma = 1.0;
};

enum class NkiVariant { kPlain, kGraph, kCentered, kGraphCentered };

Matrix kernel_matrix(const KernelSpec& spec, const Matrix& anchors_tilde);

/// Kernel evaluations of every row of X against every anchor row
/// (X.rows() x n_a). A single-row X gives kappa_k(x).
Matrix kernel_rows(const KernelSpec& spec, const Matrix& anchors_tilde,
                   const Matrix& X);

/// S_k = (K_k + lambda I)^-1 per party and M_lambda = lambda * sum_k S_k.
struct RegularizedInverses {
  std::vector<Matrix> S;
  Matrix M_lambda;
};

RegularizedInverses build_M(const std::vector<Matrix>& anchors_tilde,
                            const KernelSpec& spec, double lambda);

/// Target representation plus the quantities needed to audit it.
struct TargetSolution {
  Matrix Z_star;
  /// Constraint matrix the solution is orthonormal against
  /// (Z^T C_used Z = I). Identity for the plain solver.
  Matrix C_used;
  /// Every (generalized) eigenvalue of the reduced problem, ascending.
  Vector eigenvalues;
  /// Matrix whose trace form the solver minimised (M_lambda for the plain
  /// solver, the trace-normalised M_lambda + mu B otherwise).
  Matrix objective_matrix;
  bool constraint_regularized = false;
  bool non_unique_subspace = false;

  [[nodiscard]] double objective() const;
};

/// Bottom-d_hat eigenvectors of M_lambda.
TargetSolution solve_plain(const Matrix& M_lambda, Index d_hat);

/// d_hat smallest generalized eigenpairs of
/// (M/tr M + mu B/tr B) u = g C_used u, C_used = C or C + eps I.
TargetSolution solve_graph(const Matrix& M_lambda, const LaplacianPair& pair,
                           Index d_hat);

/// n x (n-1) Helmert basis of the mean-zero subspace.
Matrix helmert_basis(Index n);

/// solve_graph restricted to 1^T Z = 0 through Z = T Y.
TargetSolution solve_centered(const Matrix& M_lambda, const LaplacianPair& pair,
                              Index d_hat);

/// Fitted nonlinear kernel integration: g_k(x) = kappa_k(x) S_k Z.
struct KernelIntegrationModel {
  std::vector<Matrix> anchors_tilde;
  KernelSpec kernel;
  double lambda = 1.0;
  NkiVariant variant = NkiVariant::kPlain;
  Matrix Z_star;
  std::vector<Matrix> Gamma;  // S_k Z
  std::vector<Matrix> S;
  Matrix M_lambda;
  TargetSolution solution;

  [[nodiscard]] Index parties() const {
    return static_cast<Index>(Gamma.size());
  }
  [[nodiscard]] Index d_hat() const { return Z_star.cols(); }
};

/// Kernel matrices, regularised inverses, target solve by `variant`, then
/// Gamma_k = S_k Z. `pair` is required for the graph variants and defaults
/// to B = 0, C = I, mu = 0 for the centered one.
KernelIntegrationModel fit_nki(const std::vector<Matrix>& anchors_tilde,
                               const KernelSpec& spec, double lambda,
                               Index d_hat, NkiVariant variant,
                               const LaplacianPair* pair = nullptr);

Matrix apply_nki(const KernelIntegrationModel& model, Index party,
                 const Matrix& X_tilde);

/// |K Gamma - Z|_F^2 + lambda tr(Gamma^T K Gamma) for one party.
double kernel_ridge_objective(const Matrix& K, const Matrix& Gamma,
                              const Matrix& Z, double lambda);

}  // namespace dcki
