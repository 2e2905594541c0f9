#include "dcki/obfuscation.hpp"

#include <algorithm>
#include <cmath>

#include "dcki/linalg.hpp"

namespace dcki {

namespace {

void zscore_stats(const Matrix& X, Vector& mean, Vector& scale) {
  mean = X.colwise().mean().transpose();
  scale.resize(X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - mean(j)).square().mean();
    scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
}

Matrix squared_distances(const Matrix& A, const Matrix& B) {
  const Vector a2 = A.rowwise().squaredNorm();
  const Vector b2 = B.rowwise().squaredNorm();
  Matrix D = -2.0 * A * B.transpose();
  D.colwise() += a2;
  D.rowwise() += b2.transpose();
  return D.cwiseMax(0.0);
}

}  // namespace

Matrix LinearObfuscator::transform(const Matrix& X) const {
  require(X.cols() == input_dim(), ErrorCode::kDimensionMismatch,
          "obfuscator expects " + std::to_string(input_dim()) + " columns, got " +
              std::to_string(X.cols()));
  return (X.rowwise() - mean.transpose()) * projection;
}

LinearObfuscator fit_pca(const Matrix& X, Index d_tilde) {
  const Index n = X.rows();
  const Index d = X.cols();
  require(n >= 2, ErrorCode::kDimensionMismatch, "PCA needs at least two rows");
  require(d_tilde >= 1 && d_tilde <= std::min(n, d),
          ErrorCode::kDimensionMismatch,
          "d_tilde must lie in [1, min(n, d)]");
  LinearObfuscator out;
  out.mean = X.colwise().mean().transpose();
  const Matrix centered = X.rowwise() - out.mean.transpose();
  require(centered.cwiseAbs().maxCoeff() > 0.0, ErrorCode::kDegenerateData,
          "every column has zero variance");
  Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  out.projection = svd.matrixV().leftCols(d_tilde);
  linalg::apply_sign_convention(out.projection);
  return out;
}

double median_heuristic_gamma(const Matrix& X) {
  require(X.rows() >= 2, ErrorCode::kDimensionMismatch,
          "median heuristic needs at least two rows");
  Vector mean, scale;
  zscore_stats(X, mean, scale);
  const Matrix Z =
      (X.rowwise() - mean.transpose()).array().rowwise() /
      scale.transpose().array();
  const Matrix D = squared_distances(Z, Z);
  std::vector<double> pairs;
  pairs.reserve(static_cast<std::size_t>(X.rows() * (X.rows() - 1) / 2));
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = i + 1; j < X.rows(); ++j) pairs.push_back(D(i, j));
  const std::size_t mid = pairs.size() / 2;
  std::nth_element(pairs.begin(), pairs.begin() + static_cast<long>(mid),
                   pairs.end());
  double median = pairs[mid];
  if (pairs.size() % 2 == 0) {
    const double lower =
        *std::max_element(pairs.begin(), pairs.begin() + static_cast<long>(mid));
    median = 0.5 * (median + lower);
  }
  require(median > 0.0, ErrorCode::kDegenerateData,
          "median pairwise distance is zero");
  return 1.0 / median;
}

Matrix KernelObfuscator::prepare(const Matrix& X) const {
  return (X.rowwise() - feature_mean_.transpose()).array().rowwise() /
         feature_scale_.transpose().array();
}

Matrix KernelObfuscator::kernel(const Matrix& lhs, const Matrix& rhs) const {
  if (kind_ == ObfuscationKernel::kLinear) return lhs * rhs.transpose();
  return (-gamma_ * squared_distances(lhs, rhs)).array().exp();
}

KernelObfuscator fit_kpca(const Matrix& X, Index d_tilde,
                          const KpcaOptions& options) {
  const Index n = X.rows();
  require(n >= 2, ErrorCode::kDimensionMismatch,
          "kernel PCA needs at least two rows");
  require(d_tilde >= 1 && d_tilde <= n - 1, ErrorCode::kDimensionMismatch,
          "d_tilde must lie in [1, n - 1]");
  KernelObfuscator out;
  out.kind_ = options.kernel;
  if (options.standardize) {
    zscore_stats(X, out.feature_mean_, out.feature_scale_);
  } else {
    out.feature_mean_ = Vector::Zero(X.cols());
    out.feature_scale_ = Vector::Ones(X.cols());
  }
  if (options.gamma) {
    require(*options.gamma > 0.0, ErrorCode::kInvalidArgument,
            "kernel PCA bandwidth must be positive");
    out.gamma_ = *options.gamma;
  } else {
    out.gamma_ = median_heuristic_gamma(X);
  }
  out.train_ = out.prepare(X);

  const Matrix K = out.kernel(out.train_, out.train_);
  out.kernel_row_means_ = K.rowwise().mean();
  out.kernel_grand_mean_ = K.mean();
  Matrix Kc = K;
  Kc.colwise() -= out.kernel_row_means_;
  Kc.rowwise() -= out.kernel_row_means_.transpose();
  Kc.array() += out.kernel_grand_mean_;

  const linalg::SymmetricEigen eig = linalg::symmetric_eigen(Kc);
  const double lambda_max = eig.values(n - 1);
  const double tol = 1e-10 * std::max(lambda_max, 0.0);
  Index positive = 0;
  for (Index i = 0; i < n; ++i)
    if (eig.values(i) > tol) ++positive;
  require(lambda_max > 0.0 && positive >= d_tilde, ErrorCode::kRankDeficient,
          "centered kernel matrix has only " + std::to_string(positive) +
              " positive eigenvalues, need " + std::to_string(d_tilde));

  Matrix vectors(n, d_tilde);
  out.eigenvalues_.resize(d_tilde);
  for (Index j = 0; j < d_tilde; ++j) {
    vectors.col(j) = eig.vectors.col(n - 1 - j);
    out.eigenvalues_(j) = eig.values(n - 1 - j);
  }
  linalg::apply_sign_convention(vectors);
  out.dual_ = vectors * out.eigenvalues_.cwiseSqrt().cwiseInverse().asDiagonal();
  return out;
}

Matrix KernelObfuscator::transform(const Matrix& X) const {
  require(X.cols() == input_dim(), ErrorCode::kDimensionMismatch,
          "obfuscator expects " + std::to_string(input_dim()) + " columns, got " +
              std::to_string(X.cols()));
  Matrix Kx = kernel(prepare(X), train_);
  const Vector row_means = Kx.rowwise().mean();
  Kx.colwise() -= row_means;
  Kx.rowwise() -= kernel_row_means_.transpose();
  Kx.array() += kernel_grand_mean_;
  return Kx * dual_;
}

Matrix apply(const Obfuscator& obfuscator, const Matrix& X) {
  return std::visit([&](const auto& f) { return f.transform(X); }, obfuscator);
}

Index output_dim(const Obfuscator& obfuscator) {
  return std::visit([](const auto& f) { return f.output_dim(); }, obfuscator);
}

}  // namespace dcki
