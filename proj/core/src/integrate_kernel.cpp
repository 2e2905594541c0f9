#include "dcki/integrate_kernel.hpp"

#include <cmath>

#include "dcki/linalg.hpp"

namespace dcki {

namespace {

constexpr double kSingularTol = 1e-10;

Matrix unit_trace(const Matrix& A) {
  const double t = A.trace();
  return t != 0.0 ? Matrix(A / t) : A;
}

Matrix graph_objective_matrix(const Matrix& M_lambda, const LaplacianPair& pair) {
  Matrix Mp = unit_trace(M_lambda);
  if (pair.mu != 0.0 && pair.B.trace() != 0.0) Mp += pair.mu * unit_trace(pair.B);
  return linalg::symmetrize(Mp);
}

void check_pair(const Matrix& M_lambda, const LaplacianPair& pair) {
  const Index n = M_lambda.rows();
  require(M_lambda.cols() == n, ErrorCode::kShapeMismatch,
          "M_lambda must be square");
  require(pair.B.rows() == n && pair.B.cols() == n && pair.C.rows() == n &&
              pair.C.cols() == n,
          ErrorCode::kShapeMismatch, "Laplacians do not match M_lambda");
  require(pair.mu >= 0.0 && pair.epsilon >= 0.0, ErrorCode::kInvalidArgument,
          "mu and epsilon must be non-negative");
}

}  // namespace

double TargetSolution::objective() const {
  return (Z_star.transpose() * objective_matrix * Z_star).trace();
}

Matrix kernel_rows(const KernelSpec& spec, const Matrix& anchors_tilde,
                   const Matrix& X) {
  require(X.cols() == anchors_tilde.cols(), ErrorCode::kDimensionMismatch,
          "kernel input has " + std::to_string(X.cols()) +
              " columns, anchors have " + std::to_string(anchors_tilde.cols()));
  require(spec.gamma > 0.0, ErrorCode::kInvalidArgument, "gamma must be positive");
  const Index m = X.rows();
  const Index n = anchors_tilde.rows();
  Matrix out(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i)
      out(i, j) = std::exp(-spec.gamma *
                           (X.row(i) - anchors_tilde.row(j)).squaredNorm());
  }
  return out;
}

Matrix kernel_matrix(const KernelSpec& spec, const Matrix& anchors_tilde) {
  const Index n = anchors_tilde.rows();
  require(n >= 1, ErrorCode::kInvalidArgument, "no anchor rows");
  require(spec.gamma > 0.0, ErrorCode::kInvalidArgument, "gamma must be positive");
  Matrix K(n, n);
  for (Index j = 0; j < n; ++j) {
    K(j, j) = 1.0;
    for (Index i = j + 1; i < n; ++i) {
      const double v = std::exp(
          -spec.gamma * (anchors_tilde.row(i) - anchors_tilde.row(j)).squaredNorm());
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

RegularizedInverses build_M(const std::vector<Matrix>& anchors_tilde,
                            const KernelSpec& spec, double lambda) {
  require(!anchors_tilde.empty(), ErrorCode::kInvalidArgument, "no parties");
  require(lambda > 0.0, ErrorCode::kInvalidArgument, "lambda must be positive");
  const Index n = anchors_tilde.front().rows();
  RegularizedInverses out;
  out.M_lambda = Matrix::Zero(n, n);
  for (const auto& At : anchors_tilde) {
    require(At.rows() == n, ErrorCode::kShapeMismatch,
            "party anchor blocks differ in row count");
    Matrix K = kernel_matrix(spec, At);
    require(K.allFinite(), ErrorCode::kNonFinite, "kernel matrix is not finite");
    K.diagonal().array() += lambda;
    Eigen::LLT<Matrix> llt(K);
    require(llt.info() == Eigen::Success, ErrorCode::kIndefinite,
            "K + lambda I is not positive definite");
    Matrix S = llt.solve(Matrix::Identity(n, n));
    S = linalg::symmetrize(S);
    out.M_lambda += S;
    out.S.push_back(std::move(S));
  }
  out.M_lambda = linalg::symmetrize(lambda * out.M_lambda);
  return out;
}

TargetSolution solve_plain(const Matrix& M_lambda, Index d_hat) {
  const Index n = M_lambda.rows();
  require(d_hat >= 1 && d_hat <= n, ErrorCode::kDimensionMismatch,
          "d_hat must lie in [1, n_a]");
  const linalg::SymmetricEigen eig = linalg::symmetric_eigen(M_lambda);
  TargetSolution out;
  out.Z_star = eig.vectors.leftCols(d_hat);
  linalg::apply_sign_convention(out.Z_star);
  out.C_used = Matrix::Identity(n, n);
  out.eigenvalues = eig.values;
  out.objective_matrix = linalg::symmetrize(M_lambda);
  out.non_unique_subspace = linalg::has_degenerate_gap(eig.values, d_hat);
  return out;
}

TargetSolution solve_graph(const Matrix& M_lambda, const LaplacianPair& pair,
                           Index d_hat) {
  check_pair(M_lambda, pair);
  const Index n = M_lambda.rows();
  require(d_hat >= 1 && d_hat <= n, ErrorCode::kDimensionMismatch,
          "d_hat must lie in [1, n_a]");
  TargetSolution out;
  out.objective_matrix = graph_objective_matrix(M_lambda, pair);
  out.C_used = linalg::symmetrize(pair.C);
  if (linalg::smallest_eigenvalue(out.C_used) <= kSingularTol) {
    out.C_used.diagonal().array() += pair.epsilon;
    out.constraint_regularized = true;
  }
  const auto gen =
      linalg::generalized_eigen_smallest(out.objective_matrix, out.C_used, d_hat);
  out.Z_star = gen.vectors;
  out.eigenvalues = gen.values;
  out.non_unique_subspace = linalg::has_degenerate_gap(gen.values, d_hat);
  return out;
}

Matrix helmert_basis(Index n) {
  require(n >= 2, ErrorCode::kInvalidArgument, "Helmert basis needs n >= 2");
  Matrix T = Matrix::Zero(n, n - 1);
  for (Index j = 1; j < n; ++j) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(j * (j + 1)));
    T.col(j - 1).head(j).setConstant(scale);
    T(j, j - 1) = -static_cast<double>(j) * scale;
  }
  return T;
}

TargetSolution solve_centered(const Matrix& M_lambda, const LaplacianPair& pair,
                              Index d_hat) {
  check_pair(M_lambda, pair);
  const Index n = M_lambda.rows();
  require(n >= 2 && d_hat >= 1 && d_hat <= n - 1, ErrorCode::kDimensionMismatch,
          "centered solver needs 1 <= d_hat <= n_a - 1");
  const Matrix T = helmert_basis(n);
  TargetSolution out;
  out.objective_matrix = graph_objective_matrix(M_lambda, pair);
  const Matrix M_red = linalg::symmetrize(T.transpose() * out.objective_matrix * T);
  Matrix C_red = linalg::symmetrize(T.transpose() * pair.C * T);
  out.C_used = linalg::symmetrize(pair.C);
  if (linalg::smallest_eigenvalue(C_red) <= kSingularTol) {
    C_red.diagonal().array() += pair.epsilon;
    // Lift the reduced regularisation back: C + eps * T T^T.
    out.C_used += pair.epsilon * (T * T.transpose());
    out.constraint_regularized = true;
  }
  const auto gen = linalg::generalized_eigen_smallest(M_red, C_red, d_hat);
  out.Z_star = T * gen.vectors;
  linalg::apply_sign_convention(out.Z_star);
  out.eigenvalues = gen.values;
  out.non_unique_subspace = linalg::has_degenerate_gap(gen.values, d_hat);
  return out;
}

KernelIntegrationModel fit_nki(const std::vector<Matrix>& anchors_tilde,
                               const KernelSpec& spec, double lambda,
                               Index d_hat, NkiVariant variant,
                               const LaplacianPair* pair) {
  KernelIntegrationModel model;
  model.anchors_tilde = anchors_tilde;
  model.kernel = spec;
  model.lambda = lambda;
  model.variant = variant;

  RegularizedInverses inv = build_M(anchors_tilde, spec, lambda);
  const Index n = inv.M_lambda.rows();
  LaplacianPair trivial{Matrix::Zero(n, n), Matrix::Identity(n, n), 0.0, 1e-8};

  switch (variant) {
    case NkiVariant::kPlain:
      model.solution = solve_plain(inv.M_lambda, d_hat);
      break;
    case NkiVariant::kGraph:
      require(pair != nullptr, ErrorCode::kInvalidArgument,
              "graph variant needs Laplacians");
      model.solution = solve_graph(inv.M_lambda, *pair, d_hat);
      break;
    case NkiVariant::kCentered:
      model.solution = solve_centered(inv.M_lambda, pair ? *pair : trivial, d_hat);
      break;
    case NkiVariant::kGraphCentered:
      require(pair != nullptr, ErrorCode::kInvalidArgument,
              "graph variant needs Laplacians");
      model.solution = solve_centered(inv.M_lambda, *pair, d_hat);
      break;
  }
  model.Z_star = model.solution.Z_star;
  for (const auto& S : inv.S) model.Gamma.push_back(S * model.Z_star);
  model.S = std::move(inv.S);
  model.M_lambda = std::move(inv.M_lambda);
  return model;
}

Matrix apply_nki(const KernelIntegrationModel& model, Index party,
                 const Matrix& X_tilde) {
  require(party >= 0 && party < model.parties(), ErrorCode::kPartyIndex,
          "party " + std::to_string(party) + " out of range");
  const auto k = static_cast<std::size_t>(party);
  return kernel_rows(model.kernel, model.anchors_tilde[k], X_tilde) *
         model.Gamma[k];
}

double kernel_ridge_objective(const Matrix& K, const Matrix& Gamma,
                              const Matrix& Z, double lambda) {
  return (K * Gamma - Z).squaredNorm() +
         lambda * (Gamma.transpose() * K * Gamma).trace();
}

}  // namespace dcki
