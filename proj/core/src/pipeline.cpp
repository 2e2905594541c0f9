#include "dcki/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <exception>
#include <thread>
#include <type_traits>
#include <utility>

#include "dcki/anchor.hpp"
#include "dcki/graphs.hpp"
#include "dcki/obfuscation.hpp"
#include "dcki/random.hpp"

namespace dcki {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 10> kMethodNames{{
    {Method::kLocal, "Local"},
    {Method::kCentral, "Central"},
    {Method::kLki, "LKI"},
    {Method::kNki, "NKI"},
    {Method::kNkiCenter, "NKI_Center"},
    {Method::kNkiGl, "NKI_GL"},
    {Method::kNkiGlCenter, "NKI_GL_Center"},
    {Method::kNkiTsl, "NKI_TSL"},
    {Method::kNkiTslCenter, "NKI_TSL_Center"},
    {Method::kNkiTdl, "NKI_TDL"},
}};

template <class Fn>
double timed_ms(double min_total_ms, Fn&& fn) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  int reps = 0;
  double elapsed = 0.0;
  do {
    fn();
    ++reps;
    elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  } while (elapsed < min_total_ms);
  return elapsed / reps;
}

Obfuscator fit_party_obfuscator(const ExperimentConfig& config, const Matrix& X,
                                std::uint64_t seed, Index party) {
  if (config.obfuscator == ObfuscatorKind::kPca) return fit_pca(X, config.d_tilde);
  CounterRng rng =
      CounterRng::stream(seed, Purpose::kObfuscator, static_cast<std::uint64_t>(party));
  const double spread = std::log(config.kpca_bandwidth_spread);
  KpcaOptions options;
  options.gamma = median_heuristic_gamma(X) * std::exp(rng.uniform(-spread, spread));
  return fit_kpca(X, config.d_tilde, options);
}

double score(TaskMode task, const Targets& predicted, const Targets& truth) {
  return task == TaskMode::kClassification ? accuracy(predicted, truth)
                                           : rmse(predicted, truth);
}

KnnModel downstream(const ExperimentConfig& config, const Matrix& X, const Targets& y) {
  return fit_knn(X, y, std::min(config.downstream_k, X.rows()), config.task);
}

struct GraphPlan {
  std::optional<GraphSpec> intrinsic;
  std::optional<GraphSpec> penalty;
  NkiVariant variant = NkiVariant::kPlain;
};

GraphPlan graph_plan(const ExperimentConfig& config, Method method) {
  auto spec = [&](GraphKind kind) {
    GraphSpec s;
    s.kind = kind;
    s.mode = config.task;
    s.k_nn = config.k_nn;
    if (config.task == TaskMode::kRegression) s.sigma_y = config.sigma_y;
    return s;
  };
  GraphPlan plan;
  switch (method) {
    case Method::kNki: plan.variant = NkiVariant::kPlain; break;
    case Method::kNkiCenter: plan.variant = NkiVariant::kCentered; break;
    case Method::kNkiGl:
    case Method::kNkiGlCenter:
      plan.intrinsic = spec(GraphKind::kGeometric);
      plan.variant = method == Method::kNkiGl ? NkiVariant::kGraph
                                              : NkiVariant::kGraphCentered;
      break;
    case Method::kNkiTsl:
    case Method::kNkiTslCenter:
      plan.intrinsic = spec(GraphKind::kTargetSimilarity);
      plan.variant = method == Method::kNkiTsl ? NkiVariant::kGraph
                                               : NkiVariant::kGraphCentered;
      break;
    case Method::kNkiTdl:
      plan.intrinsic = spec(GraphKind::kTargetSimilarity);
      plan.penalty = spec(GraphKind::kTargetDissimilarity);
      plan.variant = NkiVariant::kGraph;
      break;
    default: break;
  }
  return plan;
}

IntegrationModel fit_integration(const ExperimentConfig& config, Method method,
                                 const std::vector<Matrix>& anchors_tilde,
                                 const Targets& anchor_y) {
  if (method == Method::kLki)
    return fit_lki(anchors_tilde, config.effective_d_hat());
  const GraphPlan plan = graph_plan(config, method);
  const KernelSpec kernel{KernelKind::kRbf, config.gamma};
  if (!plan.intrinsic && !plan.penalty)
    return fit_nki(anchors_tilde, kernel, config.lambda, config.effective_d_hat(),
                   plan.variant);
  require(anchor_y.size() == anchors_tilde.front().rows(), ErrorCode::kMissingLabels,
          "graph methods need one target per anchor row");
  const LaplacianPair pair = build_laplacian_pair(
      anchors_tilde, plan.intrinsic, plan.penalty, &anchor_y, config.mu, config.epsilon);
  return fit_nki(anchors_tilde, kernel, config.lambda, config.effective_d_hat(),
                 plan.variant, &pair);
}

TrialResult finish(Method method, std::uint64_t seed, std::vector<double> per_party,
                   double fit_ms, double transform_ms) {
  TrialResult r;
  r.method = method;
  r.seed = seed;
  double sum = 0.0;
  for (double v : per_party) sum += v;
  r.mean = sum / static_cast<double>(per_party.size());
  r.per_party = std::move(per_party);
  r.fit_ms = fit_ms;
  r.transform_ms = transform_ms;
  return r;
}

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames)
    if (n == name) return m;
  return std::nullopt;
}

std::vector<Method> all_methods() {
  std::vector<Method> out;
  for (const auto& [m, n] : kMethodNames) out.push_back(m);
  return out;
}

std::string_view to_string(ObfuscatorKind kind) {
  return kind == ObfuscatorKind::kPca ? "PCA" : "KPCA";
}

std::optional<ObfuscatorKind> parse_obfuscator(std::string_view name) {
  if (name == "PCA") return ObfuscatorKind::kPca;
  if (name == "KPCA") return ObfuscatorKind::kKpca;
  return std::nullopt;
}

void validate(const ExperimentConfig& c) {
  auto check = [](bool ok, const std::string& field, const std::string& why) {
    require(ok, ErrorCode::kConfig, "field '" + field + "': " + why);
  };
  check(c.K >= 1, "K", "must be >= 1");
  check(c.n_per_party >= 2, "n_per_party", "must be >= 2");
  check(c.d_tilde >= 1, "d_tilde", "must be >= 1");
  check(c.d_hat >= 0, "d_hat", "must be >= 0 (0 selects d_tilde)");
  check(c.n_a_smote >= 1, "n_a_smote", "must be >= 1");
  check(c.n_a >= c.n_a_smote, "n_a", "must be >= n_a_smote");
  check(c.effective_d_hat() <= c.n_a, "d_hat", "must not exceed n_a");
  check(c.k_nn >= 1, "k_nn", "must be >= 1");
  check(!c.methods.empty(), "methods", "no methods selected");
  check(c.gamma > 0.0, "gamma", "must be positive");
  check(c.lambda > 0.0, "lambda", "must be positive");
  check(c.mu >= 0.0, "mu", "must be non-negative");
  check(c.epsilon >= 0.0, "epsilon", "must be non-negative");
  check(c.sigma_y > 0.0, "sigma_y", "must be positive");
  check(c.kpca_bandwidth_spread >= 1.0, "kpca_bandwidth_spread", "must be >= 1");
  check(c.downstream_k >= 1, "downstream_k", "must be >= 1");
  check(c.n_seed >= 1, "n_seed", "must be >= 1");
  check(c.task == TaskMode::kClassification || !c.balanced, "balanced",
        "class balancing needs a classification task");
}

Partition partition(const Dataset& pool, Index K, Index n, Index test_total,
                    std::uint64_t seed) {
  require(K >= 1 && n >= 1 && test_total >= 1, ErrorCode::kInvalidArgument,
          "K, n and test_total must be positive");
  require(pool.X.rows() == pool.y.size(), ErrorCode::kShapeMismatch,
          "pool rows and targets differ in count");
  const Index need = K * n + test_total;
  require(pool.rows() >= need, ErrorCode::kInsufficientPool,
          "pool holds " + std::to_string(pool.rows()) + " rows, need " +
              std::to_string(need));
  CounterRng rng = CounterRng::stream(seed, Purpose::kPartition);
  const std::vector<Index> perm = random_permutation(pool.rows(), rng);
  Partition out;
  for (Index k = 0; k < K; ++k) {
    std::vector<Index> rows(perm.begin() + k * n, perm.begin() + (k + 1) * n);
    Dataset part = select_rows(pool, rows);
    out.parties.push_back({std::move(part.X), std::move(part.y), k});
  }
  std::vector<Index> test_rows(perm.begin() + K * n, perm.begin() + need);
  out.test = select_rows(pool, test_rows);
  return out;
}

Matrix integrate(const IntegrationModel& model, Index party, const Matrix& X_tilde) {
  return std::visit(
      [&](const auto& m) -> Matrix {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearIntegrationModel>)
          return apply_linear(m, party, X_tilde);
        else
          return apply_nki(m, party, X_tilde);
      },
      model);
}

std::vector<TrialResult> run_trial(const ExperimentConfig& config, const Dataset& pool,
                                   const Dataset& anchor_source, std::uint64_t seed) {
  validate(config);
  const Partition split = partition(pool, config.K, config.n_per_party,
                                    config.effective_test_total(), seed);
  const auto K = static_cast<std::size_t>(config.K);
  std::vector<TrialResult> results;

  const bool needs_dc = std::any_of(config.methods.begin(), config.methods.end(),
                                    [](Method m) {
                                      return m != Method::kLocal && m != Method::kCentral;
                                    });

  // Party side: anchors, obfuscators, intermediate representations.
  std::vector<Matrix> anchors_tilde, train_tilde, test_tilde;
  Targets anchor_y;
  if (needs_dc) {
    const AnchorSet sources =
        anchor_real_only(anchor_source.X, anchor_source.y, config.n_a_smote, seed);
    SmoteOptions smote;
    smote.n_a = config.n_a;
    smote.k_nn = config.k_nn;
    smote.balanced = config.balanced;
    smote.mode = config.task;
    const AnchorSet anchor = generate_anchor(sources.A, sources.y, smote, seed);
    anchor_y = anchor.y;
    for (std::size_t k = 0; k < K; ++k) {
      const Obfuscator f = fit_party_obfuscator(config, split.parties[k].X, seed,
                                                static_cast<Index>(k));
      anchors_tilde.push_back(dcki::apply(f, anchor.A));
      train_tilde.push_back(dcki::apply(f, split.parties[k].X));
      test_tilde.push_back(dcki::apply(f, split.test.X));
    }
  }

  for (Method method : config.methods) {
    std::vector<double> per_party;
    if (method == Method::kCentral) {
      std::vector<Matrix> xs;
      std::vector<Targets> ys;
      for (const auto& p : split.parties) {
        xs.push_back(p.X);
        ys.push_back(p.y);
      }
      const KnnModel h = downstream(config, vstack(xs), vstack(ys));
      per_party.push_back(score(config.task, knn_predict(h, split.test.X), split.test.y));
      results.push_back(finish(method, seed, std::move(per_party), 0.0, 0.0));
      continue;
    }
    if (method == Method::kLocal) {
      for (const auto& p : split.parties) {
        const KnnModel h = downstream(config, p.X, p.y);
        per_party.push_back(score(config.task, knn_predict(h, split.test.X), split.test.y));
      }
      results.push_back(finish(method, seed, std::move(per_party), 0.0, 0.0));
      continue;
    }

    std::optional<IntegrationModel> model;
    const double fit_ms = timed_ms(config.min_timing_ms, [&] {
      model.emplace(fit_integration(config, method, anchors_tilde, anchor_y));
    });
    std::vector<Matrix> test_hat(K);
    const double transform_ms = timed_ms(config.min_timing_ms, [&] {
      for (std::size_t k = 0; k < K; ++k)
        test_hat[k] = integrate(*model, static_cast<Index>(k), test_tilde[k]);
    });

    std::vector<Matrix> xs;
    std::vector<Targets> ys;
    for (std::size_t k = 0; k < K; ++k) {
      xs.push_back(integrate(*model, static_cast<Index>(k), train_tilde[k]));
      ys.push_back(split.parties[k].y);
    }
    const KnnModel h = downstream(config, vstack(xs), vstack(ys));
    for (std::size_t k = 0; k < K; ++k)
      per_party.push_back(score(config.task, knn_predict(h, test_hat[k]), split.test.y));
    results.push_back(finish(method, seed, std::move(per_party), fit_ms, transform_ms));
  }
  return results;
}

std::vector<MethodSummary> summarize(const std::vector<TrialResult>& trials,
                                     const std::vector<Method>& methods) {
  std::vector<MethodSummary> out;
  for (Method m : methods) {
    std::vector<double> metric, fit, transform;
    for (const auto& t : trials) {
      if (t.method != m) continue;
      metric.push_back(t.mean);
      fit.push_back(t.fit_ms);
      transform.push_back(t.transform_ms);
    }
    if (metric.empty()) continue;
    out.push_back({m, mean_ci(metric), mean_ci(fit), mean_ci(transform)});
  }
  return out;
}

ExperimentSummary run_experiment(const ExperimentConfig& config, const Dataset& pool,
                                 const Dataset& anchor_source, int jobs) {
  validate(config);
  const auto n = static_cast<std::size_t>(config.n_seed);
  std::vector<std::vector<TrialResult>> per_trial(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t r) {
    try {
      per_trial[r] = run_trial(config, pool, anchor_source, config.seed + r);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  if (jobs <= 1 || n <= 1) {
    for (std::size_t r = 0; r < n; ++r) work(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    for (std::size_t w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        for (std::size_t r = next++; r < n; r = next++) work(r);
      });
    }
    for (auto& t : workers) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentSummary out;
  for (auto& trial : per_trial)
    for (auto& r : trial) out.trials.push_back(std::move(r));
  out.methods = summarize(out.trials, config.methods);
  return out;
}

double loglog_slope(double n1, double t1, double n2, double t2) {
  require(n1 > 0 && n2 > 0 && n1 != n2 && t1 > 0 && t2 > 0,
          ErrorCode::kInvalidArgument, "log-log slope needs positive distinct points");
  return (std::log(t2) - std::log(t1)) / (std::log(n2) - std::log(n1));
}

ScalingTable bench_scaling(Method method, const std::vector<Index>& n_a_list,
                           const TimingProbe& probe) {
  require(n_a_list.size() >= 2, ErrorCode::kInvalidArgument,
          "scaling needs at least two anchor sizes");
  require(std::is_sorted(n_a_list.begin(), n_a_list.end()) &&
              std::adjacent_find(n_a_list.begin(), n_a_list.end()) == n_a_list.end(),
          ErrorCode::kInvalidArgument, "anchor sizes must be strictly ascending");
  ScalingTable table;
  table.method = method;
  for (Index n_a : n_a_list) {
    const auto [fit, transform] = probe(n_a);
    table.points.push_back({n_a, fit, transform});
    if (fit < 1.0 || transform < 1.0) {
      table.warnings.push_back("timer resolution: " + std::string(to_string(method)) +
                               " at n_a=" + std::to_string(n_a) +
                               " has a timing below 1 ms");
    }
  }
  const auto& a = table.points[table.points.size() - 2];
  const auto& b = table.points.back();
  const auto n1 = static_cast<double>(a.n_a);
  const auto n2 = static_cast<double>(b.n_a);
  table.fit_slope = loglog_slope(n1, a.fit_ms, n2, b.fit_ms);
  table.transform_slope = loglog_slope(n1, a.transform_ms, n2, b.transform_ms);
  return table;
}

std::vector<ScalingTable> bench_scaling(const ExperimentConfig& config, const Dataset& pool,
                                        const Dataset& anchor_source,
                                        const std::vector<Index>& n_a_list) {
  std::map<Index, std::vector<MethodSummary>> measured;
  for (Index n_a : n_a_list) {
    ExperimentConfig c = config;
    c.n_a = n_a;
    measured[n_a] = run_experiment(c, pool, anchor_source, 1).methods;
  }
  std::vector<ScalingTable> out;
  for (Method m : config.methods) {
    if (m == Method::kLocal || m == Method::kCentral) continue;
    out.push_back(bench_scaling(m, n_a_list, [&](Index n_a) {
      for (const auto& s : measured.at(n_a))
        if (s.method == m) return std::pair{s.fit_ms.mean, s.transform_ms.mean};
      return std::pair{0.0, 0.0};
    }));
  }
  return out;
}

}  // namespace dcki
