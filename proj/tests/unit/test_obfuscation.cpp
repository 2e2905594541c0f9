#include <gtest/gtest.h>

#include <cmath>

#include "dcki/obfuscation.hpp"
#include "dcki/random.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

using namespace dcki;

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix M(static_cast<Index>(r.size()), static_cast<Index>(r.begin()->size()));
  Index i = 0;
  for (const auto& row : r) {
    Index j = 0;
    for (double v : row) M(i, j++) = v;
    ++i;
  }
  return M;
}

Matrix gaussian_rows(Index n, Index d, std::uint64_t seed) {
  auto rng = CounterRng::stream(seed, Purpose::kTest, 100);
  return oracle::gaussian(n, d, rng);
}

}  // namespace

TEST(Pca, CollinearPointsGiveDiagonalDirection) {
  const auto f = fit_pca(rows({{0, 0}, {1, 1}, {2, 2}}), 1);
  EXPECT_NEAR(f.projection(0, 0), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(f.projection(1, 0), 1 / std::sqrt(2.0), 1e-12);
}

TEST(Pca, ProjectionIsOrthonormal) {
  const auto f = fit_pca(Matrix::Identity(3, 3), 3);
  EXPECT_LT((f.projection.transpose() * f.projection - Matrix::Identity(3, 3)).norm(), 1e-10);
  const auto g = fit_pca(gaussian_rows(30, 6, 1), 4);
  EXPECT_LT((g.projection.transpose() * g.projection - Matrix::Identity(4, 4)).norm(), 1e-10);
}

TEST(Pca, FullDimensionIsInvertible) {
  const Matrix X = gaussian_rows(12, 4, 2);
  const auto f = fit_pca(X, 4);
  const Matrix back = f.transform(X) * f.projection.transpose();
  const Matrix centered = X.rowwise() - X.colwise().mean();
  EXPECT_LT((back - centered).norm(), 1e-10);
}

TEST(Pca, ComponentsFollowDescendingSingularValues) {
  const Matrix X = gaussian_rows(40, 5, 3);
  const auto f = fit_pca(X, 5);
  const Matrix Y = f.transform(X);
  for (Index j = 0; j + 1 < 5; ++j) EXPECT_GE(Y.col(j).squaredNorm(), Y.col(j + 1).squaredNorm());
}

TEST(Pca, SignConventionLargestEntryPositive) {
  const auto f = fit_pca(gaussian_rows(20, 6, 4), 3);
  for (Index j = 0; j < 3; ++j) {
    Index arg = 0;
    f.projection.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(f.projection(arg, j), 0.0);
  }
}

TEST(Pca, Errors) {
  EXPECT_DCKI_ERROR(fit_pca(gaussian_rows(3, 5, 5), 4), ErrorCode::kDimensionMismatch);
  EXPECT_DCKI_ERROR(fit_pca(gaussian_rows(1, 5, 5), 1), ErrorCode::kDimensionMismatch);
  EXPECT_DCKI_ERROR(fit_pca(Matrix::Constant(5, 3, 2.0), 1), ErrorCode::kDegenerateData);
  const auto f = fit_pca(gaussian_rows(10, 3, 6), 2);
  EXPECT_DCKI_ERROR(f.transform(gaussian_rows(2, 4, 7)), ErrorCode::kDimensionMismatch);
}

TEST(Pca, ReconstructionBeatsRandomProjections) {
  const Matrix X = gaussian_rows(8, 5, 8);
  const Matrix Xc = X.rowwise() - X.colwise().mean();
  auto rng = CounterRng::stream(9, Purpose::kTest);
  for (Index d = 1; d <= 4; ++d) {
    const auto f = fit_pca(X, d);
    const double err = (Xc - Xc * f.projection * f.projection.transpose()).norm();
    for (int t = 0; t < 200; ++t) {
      const Matrix P = oracle::orthonormal(5, d, rng);
      EXPECT_LE(err, (Xc - Xc * P * P.transpose()).norm() + 1e-12);
    }
  }
}

TEST(LinearObfuscator, CoordinateSelection) {
  LinearObfuscator f{Vector::Zero(2), Matrix::Identity(2, 1)};
  EXPECT_DOUBLE_EQ(f.transform(rows({{3, 4}}))(0, 0), 3.0);
}

TEST(Kpca, TwoPointsAreSymmetricAboutZero) {
  const auto f = fit_kpca(rows({{0, 1}, {2, -1}}), 1, {.gamma = 0.5, .standardize = false});
  const Matrix E = f.transform(rows({{0, 1}, {2, -1}}));
  EXPECT_NEAR(E(0, 0), -E(1, 0), 1e-12);
  EXPECT_GT(std::abs(E(0, 0)), 0.1);
}

TEST(Kpca, DuplicateRowsEmbedIdentically) {
  Matrix X = gaussian_rows(8, 3, 10);
  X.row(5) = X.row(2);
  const auto f = fit_kpca(X, 3);
  const Matrix E = f.transform(X);
  EXPECT_EQ(E.row(5), E.row(2));
}

TEST(Kpca, MatchesBruteForceEigendecomposition) {
  const Matrix X = gaussian_rows(10, 4, 11);
  const double gamma = 0.3;
  const auto f = fit_kpca(X, 3, {.gamma = gamma, .standardize = false});
  const Matrix E = f.transform(X);

  const Matrix K = oracle::rbf(X, X, gamma);
  const Matrix H = Matrix::Identity(10, 10) - Matrix::Constant(10, 10, 0.1);
  const Matrix Kc = H * K * H;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Kc);
  Matrix G = Matrix::Zero(10, 10);
  for (Index j = 7; j < 10; ++j)
    G += es.eigenvalues()(j) * es.eigenvectors().col(j) * es.eigenvectors().col(j).transpose();
  EXPECT_LT((E * E.transpose() - G).norm(), 1e-9);
  EXPECT_LT((f.eigenvalues() - es.eigenvalues().tail(3).reverse()).norm(), 1e-9);
}

TEST(Kpca, ComponentsHaveUnitNormInFeatureSpace) {
  const Matrix X = gaussian_rows(15, 3, 12);
  const auto f = fit_kpca(X, 4, {.gamma = 0.7, .standardize = false});
  const Matrix K = oracle::rbf(X, X, 0.7);
  const Matrix H = Matrix::Identity(15, 15) - Matrix::Constant(15, 15, 1.0 / 15);
  const Matrix Kc = H * K * H;
  const Matrix& a = f.dual_coefficients();
  EXPECT_LT((a.transpose() * Kc * a - Matrix::Identity(4, 4)).norm(), 1e-8);
}

TEST(Kpca, LinearKernelReproducesPca) {
  const Matrix X = gaussian_rows(20, 5, 13);
  const auto pca = fit_pca(X, 3);
  const auto kpca = fit_kpca(X, 3, {.standardize = false, .kernel = ObfuscationKernel::kLinear});
  const Matrix P = pca.transform(X), Q = kpca.transform(X);
  for (Index j = 0; j < 3; ++j) {
    const double sign = P.col(j).dot(Q.col(j)) >= 0 ? 1.0 : -1.0;
    EXPECT_LT((P.col(j) - sign * Q.col(j)).cwiseAbs().maxCoeff(), 1e-6);
  }
  // Out-of-sample rows agree too.
  const Matrix Xn = gaussian_rows(4, 5, 14);
  const Matrix Pn = pca.transform(Xn), Qn = kpca.transform(Xn);
  for (Index j = 0; j < 3; ++j) {
    const double sign = P.col(j).dot(Q.col(j)) >= 0 ? 1.0 : -1.0;
    EXPECT_LT((Pn.col(j) - sign * Qn.col(j)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Kpca, MedianHeuristicOnStandardizedRows) {
  const Matrix X = gaussian_rows(9, 3, 15);
  Matrix Z = X.rowwise() - X.colwise().mean();
  for (Index j = 0; j < 3; ++j) Z.col(j) /= std::sqrt(Z.col(j).squaredNorm() / 9.0);
  std::vector<double> d;
  for (Index i = 0; i < 9; ++i)
    for (Index k = i + 1; k < 9; ++k) d.push_back((Z.row(i) - Z.row(k)).squaredNorm());
  std::sort(d.begin(), d.end());  // 36 pairs
  const double median = 0.5 * (d[17] + d[18]);
  EXPECT_NEAR(median_heuristic_gamma(X), 1.0 / median, 1e-12);
  EXPECT_NEAR(fit_kpca(X, 2).gamma(), 1.0 / median, 1e-12);
}

TEST(Kpca, Errors) {
  EXPECT_DCKI_ERROR(fit_kpca(gaussian_rows(5, 3, 16), 5), ErrorCode::kDimensionMismatch);
  // Three distinct points span at most two centred directions.
  Matrix X(6, 2);
  X << 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1;
  EXPECT_DCKI_ERROR(fit_kpca(X, 3, {.gamma = 1.0, .standardize = false}), ErrorCode::kRankDeficient);
}

TEST(Obfuscator, RowWiseProperties) {
  const Matrix X = gaussian_rows(30, 4, 17);
  const std::vector<Obfuscator> fs{fit_pca(X, 2), fit_kpca(X, 3)};
  const Matrix X1 = gaussian_rows(5, 4, 18), X2 = gaussian_rows(7, 4, 19);
  auto rng = CounterRng::stream(20, Purpose::kTest);
  const auto perm = random_permutation(12, rng);
  const Matrix S = vstack(std::vector<Matrix>{X1, X2});
  for (const auto& f : fs) {
    const Matrix whole = dcki::apply(f, S);
    EXPECT_LT((whole - vstack(std::vector<Matrix>{dcki::apply(f, X1), dcki::apply(f, X2)})).norm(), 1e-12);
    EXPECT_LT((dcki::apply(f, select_rows(S, perm)) - select_rows(whole, perm)).norm(), 1e-12);
    EXPECT_LT((dcki::apply(f, X1.topRows(1)) - whole.topRows(1)).norm(), 1e-12);
  }
}
