#pragma once

#include <vector>

#include "dcki/common.hpp"

namespace dcki {

/// Brute-force k-nearest-neighbour model. Distance ties go to the lower
/// training index; vote ties go to the smaller label.
struct KnnModel {
  Matrix train_X;
  Targets train_y;
  Index k = 5;
  TaskMode mode = TaskMode::kClassification;
};

KnnModel fit_knn(Matrix X, Targets y, Index k, TaskMode mode);

/// Majority label (classification) or neighbour mean (regression) per row.
Targets knn_predict(const KnnModel& model, const Matrix& X);

double accuracy(const Targets& predicted, const Targets& truth);
double rmse(const Targets& predicted, const Targets& truth);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
  double sd = 0.0;
  /// Fewer than two values: half_width is reported as 0.
  bool degenerate = false;
};

/// Normal-approximation interval mean +/- 1.96 sd / sqrt(N) with the
/// N - 1 sample standard deviation.
MeanCi mean_ci(const std::vector<double>& values);

}  // namespace dcki
