#include "dcki/integrate_linear.hpp"

#include <cmath>

#include "dcki/linalg.hpp"

namespace dcki {

LinearIntegrationModel fit_lki(const std::vector<Matrix>& anchors_tilde,
                               Index d_hat) {
  require(!anchors_tilde.empty(), ErrorCode::kInvalidArgument, "no parties");
  const Index n_a = anchors_tilde.front().rows();
  require(d_hat >= 1 && d_hat <= n_a, ErrorCode::kDimensionMismatch,
          "d_hat must lie in [1, n_a]");

  LinearIntegrationModel model;
  std::vector<linalg::ThinSvd> svds;
  svds.reserve(anchors_tilde.size());
  Index total_rank = 0;
  for (std::size_t k = 0; k < anchors_tilde.size(); ++k) {
    const Matrix& At = anchors_tilde[k];
    require(At.rows() == n_a, ErrorCode::kShapeMismatch,
            "party anchor blocks differ in row count");
    require(At.allFinite(), ErrorCode::kNonFinite, "anchor block is not finite");
    svds.push_back(linalg::truncated_svd(At));
    const Index r = svds.back().singular_values.size();
    require(r > 0, ErrorCode::kDegenerateData,
            "party " + std::to_string(k) + " has an all-zero anchor block");
    model.ranks.push_back(r);
    total_rank += r;
  }

  Matrix WQ(n_a, total_rank);
  Index at = 0;
  for (const auto& s : svds) {
    WQ.middleCols(at, s.U.cols()) = s.U;
    at += s.U.cols();
  }

  Matrix U;
  if (d_hat <= total_rank) {
    Eigen::JacobiSVD<Matrix> svd(WQ, Eigen::ComputeThinU);
    U = svd.matrixU().leftCols(d_hat);
    model.singular_values = svd.singularValues();
  } else {
    // Fewer basis vectors than target columns: the remaining directions
    // carry zero singular value and any orthonormal completion is optimal.
    Eigen::JacobiSVD<Matrix> svd(WQ, Eigen::ComputeFullU);
    U = svd.matrixU().leftCols(d_hat);
    model.singular_values = svd.singularValues();
  }
  linalg::apply_sign_convention(U);
  model.Z_star = std::move(U);

  const Vector& s = model.singular_values;
  auto sigma = [&](Index i) { return i < s.size() ? s(i) : 0.0; };
  model.non_unique_subspace =
      d_hat < n_a && std::abs(sigma(d_hat - 1) - sigma(d_hat)) < 1e-10;

  for (const auto& svdk : svds) {
    model.G.push_back(svdk.V *
                      svdk.singular_values.cwiseInverse().asDiagonal() *
                      (svdk.U.transpose() * model.Z_star));
  }
  model.objective_value = lki_objective(anchors_tilde, model.G, model.Z_star);
  return model;
}

Matrix apply_linear(const LinearIntegrationModel& model, Index party,
                    const Matrix& X_tilde) {
  require(party >= 0 && party < model.parties(), ErrorCode::kPartyIndex,
          "party " + std::to_string(party) + " out of range");
  const Matrix& G = model.G[static_cast<std::size_t>(party)];
  require(X_tilde.cols() == G.rows(), ErrorCode::kDimensionMismatch,
          "party " + std::to_string(party) + " expects " +
              std::to_string(G.rows()) + " columns");
  return X_tilde * G;
}

double lki_objective(const std::vector<Matrix>& anchors_tilde,
                     const std::vector<Matrix>& G, const Matrix& Z) {
  double total = 0.0;
  for (std::size_t k = 0; k < anchors_tilde.size(); ++k)
    total += (anchors_tilde[k] * G[k] - Z).squaredNorm();
  return total;
}

}  // namespace dcki
