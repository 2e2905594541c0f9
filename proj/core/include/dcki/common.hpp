#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dcki {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

/// Targets are stored as doubles in both task modes; class ids are
/// integer-valued.
using Targets = Eigen::VectorXd;

enum class TaskMode { kClassification, kRegression };

enum class ErrorCode {
  kDimensionMismatch,
  kDegenerateData,
  kRankDeficient,
  kInsufficientSource,
  kDivisibility,
  kMissingLabels,
  kShapeMismatch,
  kAsymmetric,
  kNonFinite,
  kIndefinite,
  kPartyIndex,
  kInsufficientPool,
  kTooFewLeaks,
  kEmptyEvalSet,
  kLabelNotPresent,
  kAllAttacksFailed,
  kInvalidArgument,
  kConfig,
  kFormat,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

/// A labelled sample matrix: one row per sample.
struct Dataset {
  Matrix X;
  Targets y;

  [[nodiscard]] Index rows() const { return X.rows(); }
};

/// Row subset in the given order.
Matrix select_rows(const Matrix& X, const std::vector<Index>& rows);
Targets select_rows(const Targets& y, const std::vector<Index>& rows);
Dataset select_rows(const Dataset& data, const std::vector<Index>& rows);

/// Vertical concatenation of blocks with equal column counts.
Matrix vstack(const std::vector<Matrix>& blocks);
Targets vstack(const std::vector<Targets>& blocks);

/// Thread count for Eigen's numeric kernels. Without OpenMP Eigen is always
/// single-threaded and this only records the request.
void set_numeric_threads(int threads);
int numeric_threads();

/// Sorted distinct values of an integer-valued target vector.
std::vector<double> distinct_labels(const Targets& y);

}  // namespace dcki
