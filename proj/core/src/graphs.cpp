#include "dcki/graphs.hpp"

#include <algorithm>
#include <cmath>

namespace dcki {

NeighborLists knn_neighbors(const Matrix& points, Index k_nn) {
  const Index n = points.rows();
  require(k_nn >= 1 && k_nn < n, ErrorCode::kInvalidArgument,
          "k_nn must satisfy 1 <= k_nn < n_a (k_nn = " + std::to_string(k_nn) +
              ", n_a = " + std::to_string(n) + ")");
  NeighborLists out(static_cast<std::size_t>(n));
  std::vector<std::pair<double, Index>> cand(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[c++] = {(points.row(i) - points.row(j)).squaredNorm(), j};
    }
    std::partial_sort(cand.begin(), cand.begin() + k_nn, cand.end());
    auto& row = out[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(k_nn));
    for (Index m = 0; m < k_nn; ++m) row.push_back(cand[static_cast<std::size_t>(m)].second);
  }
  return out;
}

Matrix raw_weights(const GraphSpec& spec, const NeighborLists& neighbors,
                   const Targets* labels) {
  const auto n = static_cast<Index>(neighbors.size());
  const bool needs_labels = spec.kind != GraphKind::kGeometric;
  require(!needs_labels || labels != nullptr, ErrorCode::kMissingLabels,
          "TSL/TDL weights need anchor targets");
  require(!needs_labels || labels->size() == n, ErrorCode::kShapeMismatch,
          "anchor targets and neighbour lists differ in length");
  const bool regression = spec.mode == TaskMode::kRegression;
  double inv_sigma2 = 0.0;
  if (needs_labels && regression) {
    require(spec.sigma_y.has_value() && *spec.sigma_y > 0.0,
            ErrorCode::kInvalidArgument,
            "regression TSL/TDL needs a positive sigma_y");
    inv_sigma2 = 1.0 / (*spec.sigma_y * *spec.sigma_y);
  }

  Matrix W = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j : neighbors[static_cast<std::size_t>(i)]) {
      if (j == i) continue;
      double w = 0.0;
      switch (spec.kind) {
        case GraphKind::kGeometric:
          w = 1.0;
          break;
        case GraphKind::kTargetSimilarity: {
          const double diff = (*labels)(i) - (*labels)(j);
          w = regression ? std::exp(-diff * diff * inv_sigma2)
                         : (diff == 0.0 ? 1.0 : 0.0);
          break;
        }
        case GraphKind::kTargetDissimilarity: {
          const double diff = (*labels)(i) - (*labels)(j);
          w = regression ? 1.0 - std::exp(-diff * diff * inv_sigma2)
                         : (diff != 0.0 ? 1.0 : 0.0);
          break;
        }
      }
      W(i, j) = w;
    }
  }
  return W;
}

Matrix symmetrize_weights(const Matrix& W_hat) {
  require(W_hat.rows() == W_hat.cols(), ErrorCode::kShapeMismatch,
          "weight matrix must be square");
  return 0.5 * (W_hat + W_hat.transpose());
}

Matrix aggregate_weights(const std::vector<Matrix>& per_party) {
  require(!per_party.empty(), ErrorCode::kShapeMismatch,
          "no party weights to aggregate");
  Matrix sum = Matrix::Zero(per_party.front().rows(), per_party.front().cols());
  for (const auto& W : per_party) {
    require(W.rows() == sum.rows() && W.cols() == sum.cols(),
            ErrorCode::kShapeMismatch, "party weight matrices differ in shape");
    sum += W;
  }
  return sum / static_cast<double>(per_party.size());
}

Matrix laplacian(const Matrix& W) {
  require(W.rows() == W.cols(), ErrorCode::kShapeMismatch,
          "weight matrix must be square");
  require((W - W.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
          ErrorCode::kAsymmetric, "Laplacian input is not symmetric");
  Matrix L = -W;
  L.diagonal() += W.rowwise().sum();
  return L;
}

Matrix build_laplacian(const std::vector<Matrix>& anchors_tilde,
                       const GraphSpec& spec, const Targets* labels) {
  require(!anchors_tilde.empty(), ErrorCode::kShapeMismatch, "no parties");
  std::vector<Matrix> per_party;
  per_party.reserve(anchors_tilde.size());
  for (const auto& At : anchors_tilde) {
    per_party.push_back(
        symmetrize_weights(raw_weights(spec, knn_neighbors(At, spec.k_nn), labels)));
  }
  return laplacian(aggregate_weights(per_party));
}

LaplacianPair build_laplacian_pair(const std::vector<Matrix>& anchors_tilde,
                                   const std::optional<GraphSpec>& intrinsic,
                                   const std::optional<GraphSpec>& penalty,
                                   const Targets* labels, double mu,
                                   double epsilon) {
  require(!anchors_tilde.empty(), ErrorCode::kShapeMismatch, "no parties");
  const Index n = anchors_tilde.front().rows();
  LaplacianPair pair;
  pair.mu = mu;
  pair.epsilon = epsilon;
  pair.B = intrinsic ? build_laplacian(anchors_tilde, *intrinsic, labels)
                     : Matrix::Zero(n, n);
  pair.C = penalty ? build_laplacian(anchors_tilde, *penalty, labels)
                   : Matrix::Identity(n, n);
  return pair;
}

}  // namespace dcki
