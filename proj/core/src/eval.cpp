#include "dcki/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dcki {

KnnModel fit_knn(Matrix X, Targets y, Index k, TaskMode mode) {
  require(X.rows() == y.size(), ErrorCode::kShapeMismatch,
          "training rows and targets differ in count");
  require(k >= 1 && k <= X.rows(), ErrorCode::kInvalidArgument,
          "k must lie in [1, training rows]");
  return {std::move(X), std::move(y), k, mode};
}

Targets knn_predict(const KnnModel& model, const Matrix& X) {
  require(X.cols() == model.train_X.cols(), ErrorCode::kDimensionMismatch,
          "query has " + std::to_string(X.cols()) + " features, model has " +
              std::to_string(model.train_X.cols()));
  const Index n = model.train_X.rows();
  const Index k = model.k;
  Targets out(X.rows());
  const Matrix train_T = model.train_X.transpose();
  std::vector<std::pair<double, Index>> cand(static_cast<std::size_t>(n));
  for (Index q = 0; q < X.rows(); ++q) {
    const Vector query = X.row(q).transpose();
    const RowVector dist = (train_T.colwise() - query).colwise().squaredNorm();
    for (Index i = 0; i < n; ++i)
      cand[static_cast<std::size_t>(i)] = {dist(i), i};
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    if (model.mode == TaskMode::kRegression) {
      double sum = 0.0;
      for (Index m = 0; m < k; ++m)
        sum += model.train_y(cand[static_cast<std::size_t>(m)].second);
      out(q) = sum / static_cast<double>(k);
    } else {
      std::map<double, Index> votes;  // ascending labels
      for (Index m = 0; m < k; ++m)
        ++votes[model.train_y(cand[static_cast<std::size_t>(m)].second)];
      double best = votes.begin()->first;
      Index best_count = 0;
      for (const auto& [label, count] : votes) {
        if (count > best_count) {
          best = label;
          best_count = count;
        }
      }
      out(q) = best;
    }
  }
  return out;
}

double accuracy(const Targets& predicted, const Targets& truth) {
  require(predicted.size() == truth.size() && truth.size() >= 1,
          ErrorCode::kShapeMismatch, "accuracy needs equal non-empty vectors");
  Index hits = 0;
  for (Index i = 0; i < truth.size(); ++i)
    if (predicted(i) == truth(i)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double rmse(const Targets& predicted, const Targets& truth) {
  require(predicted.size() == truth.size() && truth.size() >= 1,
          ErrorCode::kShapeMismatch, "rmse needs equal non-empty vectors");
  return std::sqrt((predicted - truth).squaredNorm() /
                   static_cast<double>(truth.size()));
}

MeanCi mean_ci(const std::vector<double>& values) {
  require(!values.empty(), ErrorCode::kInvalidArgument, "no values");
  MeanCi out;
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  if (values.size() < 2) {
    out.degenerate = true;
    return out;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / (n - 1.0));
  out.half_width = 1.96 * out.sd / std::sqrt(n);
  return out;
}

}  // namespace dcki
