#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dcki/anchor.hpp"
#include "dcki/common.hpp"
#include "dcki/pipeline.hpp"

namespace dcki {

enum class AttackKind { kLr, kPinv, kMlp };

std::string_view to_string(AttackKind kind);

/// What an attacker holds for one party: leaked (original, intermediate)
/// anchor pairs, plus the rows whose reconstruction is scored.
struct AttackScenario {
  std::vector<Index> leaked_indices;
  Matrix leaked_A;
  Matrix leaked_A_tilde;
  std::vector<Index> eval_indices;
  Matrix eval_A;
  Matrix eval_A_tilde;
  Targets eval_y;
};

/// Leaks every anchor row whose label is in `labels`; the remaining rows
/// form the evaluation set, optionally thinned to `eval_per_label` rows per
/// label by a seeded draw.
AttackScenario leak_by_label(const AnchorSet& anchor, const Matrix& anchor_tilde,
                             const std::vector<double>& labels,
                             std::optional<Index> eval_per_label = std::nullopt,
                             std::uint64_t seed = 0);

/// x_hat = (x_tilde - input_mean) * weights + output_mean
struct AffineMap {
  Vector input_mean;
  Matrix weights;
  Vector output_mean;

  [[nodiscard]] Matrix operator()(const Matrix& X) const;
};

/// One hidden ReLU layer, linear output.
struct MlpNetwork {
  Matrix W1;  // in x hidden
  RowVector b1;
  Matrix W2;  // hidden x out
  RowVector b2;

  [[nodiscard]] Matrix operator()(const Matrix& X) const;
};

class Reconstructor {
 public:
  Reconstructor(AttackKind kind, std::variant<AffineMap, MlpNetwork> map)
      : kind_(kind), map_(std::move(map)) {}

  [[nodiscard]] AttackKind kind() const { return kind_; }
  [[nodiscard]] Matrix reconstruct(const Matrix& X_tilde) const;
  [[nodiscard]] const std::variant<AffineMap, MlpNetwork>& map() const { return map_; }

 private:
  AttackKind kind_;
  std::variant<AffineMap, MlpNetwork> map_;
};

/// Centred minimum-norm least squares from intermediate to original space.
Reconstructor fit_lr(const AttackScenario& scenario);

/// Centred least-squares forward map F (d x d_tilde) with
/// A_tilde_c ~ A_c F.
Matrix estimate_forward_map(const AttackScenario& scenario);

/// x_hat = (x_tilde - mean_tilde) * pinv(F) + mean_A.
Reconstructor fit_pinv(const AttackScenario& scenario);

struct MlpConfig {
  Index hidden = 128;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  Index max_epochs = 600;
  Index patience = 10;
  double tolerance = 1e-6;
  double validation_fraction = 0.2;
  /// Above this many training rows, mini-batches of `batch_size` are used.
  Index full_batch_limit = 256;
  Index batch_size = 64;
  std::uint64_t seed = 0;
};

struct MlpTrace {
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  std::vector<double> best_validation_loss;  // best-so-far per epoch
  Index best_epoch = -1;
};

Reconstructor fit_mlp(const AttackScenario& scenario, const MlpConfig& config,
                      MlpTrace* trace = nullptr);

using Predictor = std::function<Targets(const Matrix&)>;

/// Fraction of evaluation rows whose reconstruction `classifier` assigns to
/// the true label.
double reconstruction_accuracy(const Reconstructor& reconstructor,
                               const Matrix& eval_A_tilde, const Targets& eval_y,
                               const Predictor& classifier);

struct AttackOutcome {
  AttackKind kind = AttackKind::kLr;
  std::optional<double> score;  // empty when fitting failed
  std::string failure;
};

struct AttackReport {
  AttackKind best = AttackKind::kLr;
  double best_score = 0.0;
  std::vector<AttackOutcome> outcomes;
  std::vector<std::string> warnings;
};

/// Highest score wins; ties go to the earlier of LR, PINV, MLP. Failed
/// outcomes are skipped with a warning.
AttackReport select_best(std::vector<AttackOutcome> outcomes);

AttackReport best_attack(const AttackScenario& scenario, const MlpConfig& config,
                         const Predictor& classifier);

/// Reconstruction audit of one party under one obfuscation condition.
struct AuditConfig {
  ObfuscatorKind obfuscator = ObfuscatorKind::kPca;
  Index d_tilde = 4;
  Index n_a = 1000;                  // real anchors, stratified
  Index n_per_party = 100;           // rows the target party fits f_k on
  std::vector<double> leak_labels{0, 1, 2};
  std::optional<Index> eval_per_label = 50;
  Index oracle_k = 5;
  MlpConfig mlp;
};

struct AuditResult {
  std::uint64_t seed = 0;
  AttackReport report;
  /// Forward map estimated by PINV and, for PCA, the true projection.
  Matrix estimated_forward;
  std::optional<Matrix> true_projection;
};

/// The target party's rows come from a seeded draw of `pool`, anchors from
/// `anchor_source`, and the label oracle is a k-NN trained on `oracle`.
AuditResult run_audit(const AuditConfig& config, const Dataset& pool,
                      const Dataset& anchor_source, const Dataset& oracle,
                      std::uint64_t seed);

}  // namespace dcki
