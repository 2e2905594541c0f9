#pragma once

#include <optional>
#include <vector>

#include "dcki/common.hpp"

namespace dcki {

enum class GraphKind {
  kGeometric,          // GL
  kTargetSimilarity,   // TSL
  kTargetDissimilarity // TDL
};

struct GraphSpec {
  GraphKind kind = GraphKind::kGeometric;
  TaskMode mode = TaskMode::kClassification;
  Index k_nn = 10;
  /// Scale of target differences; regression TSL/TDL only.
  std::optional<double> sigma_y;
};

/// Intrinsic (B) and penalty (C) Laplacians with the solver knobs that go
/// with them.
struct LaplacianPair {
  Matrix B;
  Matrix C;
  double mu = 1.0;
  double epsilon = 1e-8;
};

using NeighborLists = std::vector<std::vector<Index>>;

/// k_nn nearest rows of each row (Euclidean, self excluded, distance ties
/// by lower index), nearest first.
NeighborLists knn_neighbors(const Matrix& points, Index k_nn);

/// Per-party weights W_hat before symmetrisation. Entry (i, j) is non-zero
/// only when j is among i's neighbours.
Matrix raw_weights(const GraphSpec& spec, const NeighborLists& neighbors,
                   const Targets* labels);

Matrix symmetrize_weights(const Matrix& W_hat);

/// Entrywise mean over parties.
Matrix aggregate_weights(const std::vector<Matrix>& per_party);

/// L = D - W. Throws kAsymmetric when |W - W^T| exceeds 1e-10.
Matrix laplacian(const Matrix& W);

/// Builds one Laplacian from every party's anchor intermediate
/// representation: neighbours, raw weights, symmetrise, average, L = D - W.
Matrix build_laplacian(const std::vector<Matrix>& anchors_tilde,
                       const GraphSpec& spec, const Targets* labels);

/// B from `intrinsic` (zero when absent), C from `penalty` (identity when
/// absent).
LaplacianPair build_laplacian_pair(const std::vector<Matrix>& anchors_tilde,
                                   const std::optional<GraphSpec>& intrinsic,
                                   const std::optional<GraphSpec>& penalty,
                                   const Targets* labels, double mu,
                                   double epsilon = 1e-8);

}  // namespace dcki
