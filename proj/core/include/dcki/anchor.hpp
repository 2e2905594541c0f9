#pragma once

#include <cstdint>

#include "dcki/common.hpp"

namespace dcki {

/// Shared pseudo-data: the first `source_count` rows are real source
/// samples, the remainder are SMOTE interpolants.
struct AnchorSet {
  Matrix A;        // n_a x d
  Targets y;       // class id (or real target in regression mode)
  Index source_count = 0;
  Index neighbor_count = 0;

  [[nodiscard]] Index size() const { return A.rows(); }
};

struct SmoteOptions {
  Index n_a = 0;
  Index k_nn = 10;
  /// Equal class counts n_a / #classes. Classification only.
  bool balanced = true;
  /// In regression mode every source is a neighbour candidate of every
  /// other; in classification mode only same-label sources are.
  TaskMode mode = TaskMode::kClassification;
};

/// Real sources followed by SMOTE rows row + u * (neighbour - row), with one
/// u ~ U[0,1) shared by all coordinates and the neighbour chosen uniformly
/// among the k_nn nearest same-label sources (Euclidean, excluding self).
AnchorSet generate_anchor(const Matrix& source_X, const Targets& source_y,
                          const SmoteOptions& options, std::uint64_t seed);

/// Class-stratified subsample of n_a real rows without replacement. Quotas
/// are n_a / #classes per label, water-filled when a class runs short;
/// selected rows keep their original relative order.
AnchorSet anchor_real_only(const Matrix& source_X, const Targets& source_y,
                           Index n_a, std::uint64_t seed);

}  // namespace dcki
