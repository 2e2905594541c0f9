#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dcki/common.hpp"
#include "dcki/eval.hpp"
#include "dcki/integrate_kernel.hpp"
#include "dcki/integrate_linear.hpp"

namespace dcki {

enum class Method {
  kLocal,
  kCentral,
  kLki,
  kNki,
  kNkiCenter,
  kNkiGl,
  kNkiGlCenter,
  kNkiTsl,
  kNkiTslCenter,
  kNkiTdl,
};

enum class ObfuscatorKind { kPca, kKpca };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);
std::string_view to_string(ObfuscatorKind kind);
std::optional<ObfuscatorKind> parse_obfuscator(std::string_view name);
std::vector<Method> all_methods();

struct ExperimentConfig {
  TaskMode task = TaskMode::kClassification;
  Index K = 10;
  Index n_per_party = 100;
  /// Shared test rows; 0 means n_per_party * K.
  Index test_total = 0;
  Index d_tilde = 10;
  /// 0 means d_hat = d_tilde.
  Index d_hat = 0;
  Index n_a = 1000;
  Index n_a_smote = 100;
  Index k_nn = 10;
  bool balanced = true;
  std::vector<Method> methods{Method::kNki};
  ObfuscatorKind obfuscator = ObfuscatorKind::kKpca;
  /// KPCA party bandwidths are drawn log-uniformly from
  /// [gamma_med / spread, gamma_med * spread].
  double kpca_bandwidth_spread = 10.0;
  double gamma = 1.0;
  double lambda = 1.0;
  double mu = 1.0;
  double epsilon = 1e-8;
  double sigma_y = 1.0;
  Index downstream_k = 5;
  std::uint64_t seed = 0;  // trial r runs with seed + r
  Index n_seed = 1;
  /// Each timed section is repeated until this much wall time accumulates;
  /// the per-run mean is reported. 0 times a single run.
  double min_timing_ms = 0.0;

  [[nodiscard]] Index effective_d_hat() const { return d_hat > 0 ? d_hat : d_tilde; }
  [[nodiscard]] Index effective_test_total() const {
    return test_total > 0 ? test_total : n_per_party * K;
  }
};

/// Throws kConfig naming the offending field.
void validate(const ExperimentConfig& config);

struct PartyDataset {
  Matrix X;
  Targets y;
  Index party_id = 0;
};

struct Partition {
  std::vector<PartyDataset> parties;
  Dataset test;
};

/// Disjoint uniform split of `pool` into K parties of n rows and one
/// shared test set.
Partition partition(const Dataset& pool, Index K, Index n, Index test_total,
                    std::uint64_t seed);

using IntegrationModel = std::variant<LinearIntegrationModel, KernelIntegrationModel>;

/// g_k applied row-wise.
Matrix integrate(const IntegrationModel& model, Index party, const Matrix& X_tilde);

struct TrialResult {
  Method method = Method::kNki;
  std::uint64_t seed = 0;
  /// Accuracy (classification) or RMSE (regression) per party; Central has
  /// a single entry.
  std::vector<double> per_party;
  double mean = 0.0;
  double fit_ms = 0.0;
  double transform_ms = 0.0;
};

/// One trial of every configured method on a shared partition, anchor set
/// and set of party obfuscators. Anchors come from `anchor_source`, which
/// must be disjoint from `pool`.
std::vector<TrialResult> run_trial(const ExperimentConfig& config,
                                   const Dataset& pool,
                                   const Dataset& anchor_source,
                                   std::uint64_t seed);

struct MethodSummary {
  Method method = Method::kNki;
  MeanCi metric;
  MeanCi fit_ms;
  MeanCi transform_ms;
};

struct ExperimentSummary {
  std::vector<TrialResult> trials;  // trial-major, method order within trial
  std::vector<MethodSummary> methods;
};

/// Trials r = 0..n_seed-1 with seed = config.seed + r. `jobs` > 1 runs
/// trials on worker threads; results are identical to jobs = 1.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const Dataset& pool,
                                 const Dataset& anchor_source, int jobs = 1);

std::vector<MethodSummary> summarize(const std::vector<TrialResult>& trials,
                                     const std::vector<Method>& methods);

struct ScalingPoint {
  Index n_a = 0;
  double fit_ms = 0.0;
  double transform_ms = 0.0;
};

struct ScalingTable {
  Method method = Method::kNki;
  std::vector<ScalingPoint> points;
  /// Local log-log slope over the last two points.
  double fit_slope = 0.0;
  double transform_slope = 0.0;
  std::vector<std::string> warnings;
};

double loglog_slope(double n1, double t1, double n2, double t2);

/// (fit_ms, transform_ms) at a given anchor size.
using TimingProbe = std::function<std::pair<double, double>(Index n_a)>;

ScalingTable bench_scaling(Method method, const std::vector<Index>& n_a_list,
                           const TimingProbe& probe);

/// Runs config.n_seed trials per anchor size and tabulates mean timings of
/// every configured method.
std::vector<ScalingTable> bench_scaling(const ExperimentConfig& config,
                                        const Dataset& pool,
                                        const Dataset& anchor_source,
                                        const std::vector<Index>& n_a_list);

}  // namespace dcki
