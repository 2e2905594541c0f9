#include "dcki/common.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include <Eigen/Core>

namespace dcki {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kDegenerateData: return "degenerate data";
    case ErrorCode::kRankDeficient: return "rank deficient";
    case ErrorCode::kInsufficientSource: return "insufficient source";
    case ErrorCode::kDivisibility: return "divisibility";
    case ErrorCode::kMissingLabels: return "missing labels";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kAsymmetric: return "asymmetric matrix";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kIndefinite: return "indefinite matrix";
    case ErrorCode::kPartyIndex: return "party index out of range";
    case ErrorCode::kInsufficientPool: return "insufficient pool";
    case ErrorCode::kTooFewLeaks: return "too few leaked pairs";
    case ErrorCode::kEmptyEvalSet: return "empty evaluation set";
    case ErrorCode::kLabelNotPresent: return "label not present";
    case ErrorCode::kAllAttacksFailed: return "all attacks failed";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kIo: return "io error";
  }
  return "unknown error";
}

Matrix select_rows(const Matrix& X, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Index>(i)) = X.row(rows[i]);
  return out;
}

Targets select_rows(const Targets& y, const std::vector<Index>& rows) {
  Targets out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out(static_cast<Index>(i)) = y(rows[i]);
  return out;
}

Dataset select_rows(const Dataset& data, const std::vector<Index>& rows) {
  return {select_rows(data.X, rows), select_rows(data.y, rows)};
}

Matrix vstack(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) return {};
  Index total = 0;
  const Index cols = blocks.front().cols();
  for (const auto& b : blocks) {
    require(b.cols() == cols, ErrorCode::kShapeMismatch,
            "vstack blocks differ in column count");
    total += b.rows();
  }
  Matrix out(total, cols);
  Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

Targets vstack(const std::vector<Targets>& blocks) {
  Index total = 0;
  for (const auto& b : blocks) total += b.size();
  Targets out(total);
  Index at = 0;
  for (const auto& b : blocks) {
    out.segment(at, b.size()) = b;
    at += b.size();
  }
  return out;
}

std::vector<double> distinct_labels(const Targets& y) {
  std::set<double> seen(y.data(), y.data() + y.size());
  return {seen.begin(), seen.end()};
}

namespace {
std::atomic<int> requested_threads{1};
}

void set_numeric_threads(int threads) {
  require(threads >= 1, ErrorCode::kInvalidArgument, "thread count must be >= 1");
  requested_threads = threads;
  Eigen::setNbThreads(threads);
}

int numeric_threads() { return requested_threads; }

}  // namespace dcki
