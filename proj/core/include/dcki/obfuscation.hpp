#pragma once

#include <optional>
#include <variant>

#include "dcki/common.hpp"

namespace dcki {

/// Party-side linear reduction x -> (x - mean) * projection.
struct LinearObfuscator {
  Vector mean;        // length d
  Matrix projection;  // d x d_tilde, orthonormal columns

  [[nodiscard]] Index input_dim() const { return projection.rows(); }
  [[nodiscard]] Index output_dim() const { return projection.cols(); }
  [[nodiscard]] Matrix transform(const Matrix& X) const;
};

enum class ObfuscationKernel {
  kRbf,
  /// Plain inner product; exists so kernel PCA can be checked against PCA.
  kLinear,
};

struct KpcaOptions {
  /// Bandwidth of exp(-gamma * |x - x'|^2). Unset selects the median
  /// heuristic on the standardized training rows.
  std::optional<double> gamma;
  /// Evaluate the kernel on z-scored features (statistics from the fit).
  bool standardize = true;
  ObfuscationKernel kernel = ObfuscationKernel::kRbf;
};

/// Kernel PCA embedding fitted on one party's rows.
class KernelObfuscator {
 public:
  KernelObfuscator() = default;

  [[nodiscard]] Index input_dim() const { return feature_mean_.size(); }
  [[nodiscard]] Index output_dim() const { return dual_.cols(); }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] const Matrix& dual_coefficients() const { return dual_; }
  [[nodiscard]] const Vector& eigenvalues() const { return eigenvalues_; }
  [[nodiscard]] Matrix transform(const Matrix& X) const;

 private:
  friend KernelObfuscator fit_kpca(const Matrix&, Index, const KpcaOptions&);

  Matrix kernel(const Matrix& lhs, const Matrix& rhs) const;
  Matrix prepare(const Matrix& X) const;

  ObfuscationKernel kind_ = ObfuscationKernel::kRbf;
  Matrix train_;              // prepared training rows, n_fit x d
  Vector feature_mean_;       // length d (zero if not standardizing)
  Vector feature_scale_;      // length d (one if not standardizing)
  double gamma_ = 1.0;
  Matrix dual_;               // n_fit x d_tilde
  Vector eigenvalues_;        // d_tilde retained centered-kernel eigenvalues
  Vector kernel_row_means_;   // length n_fit
  double kernel_grand_mean_ = 0.0;
};

using Obfuscator = std::variant<LinearObfuscator, KernelObfuscator>;

/// Principal components of the column-centred X, ordered by descending
/// singular value, with the sign convention applied.
LinearObfuscator fit_pca(const Matrix& X, Index d_tilde);

KernelObfuscator fit_kpca(const Matrix& X, Index d_tilde,
                          const KpcaOptions& options = {});

/// 1 / median pairwise squared distance of the z-scored rows of X.
double median_heuristic_gamma(const Matrix& X);

/// Row-wise f_k. Throws kDimensionMismatch when X has the wrong width.
Matrix apply(const Obfuscator& obfuscator, const Matrix& X);

Index output_dim(const Obfuscator& obfuscator);

}  // namespace dcki
