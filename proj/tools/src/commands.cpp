#include "dcki/app/commands.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <thread>

#include "dcki/anchor.hpp"
#include "dcki/app/dataset.hpp"
#include "dcki/app/output.hpp"

namespace dcki::app {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Session {
  AppConfig config;
  CommandOptions options;
  std::string hash;
  RunManifest manifest;
};

Session open_session(const char* command, AppConfig config, CommandOptions options) {
  config.experiment.seed += options.seed_offset;
  if (options.bench) options.jobs = 1;
  options.jobs = std::max(options.jobs, 1);
  set_numeric_threads(resolve_threads(options));

  Session s{std::move(config), options, {}, {}};
  s.hash = config_hash(s.config);
  s.manifest.command = command;
  s.manifest.config = to_json(s.config);
  s.manifest.config_hash = s.hash;
  s.manifest.environment = {kVersion, numeric_threads(), options.jobs, options.bench,
                            options.seed_offset};
  s.manifest.started_at = utc_timestamp();
  std::filesystem::create_directories(options.out);
  return s;
}

RunManifest close_session(Session& s) {
  s.manifest.finished_at = utc_timestamp();
  write_text(s.options.out / "manifest.json", to_json(s.manifest).dump(2) + "\n");
  return s.manifest;
}

const char* metric_name(TaskMode task) {
  return task == TaskMode::kClassification ? "accuracy" : "rmse";
}

json mean_ci_json(const MeanCi& m) {
  return {{"mean", m.mean}, {"half_width", m.half_width}, {"sd", m.sd},
          {"degenerate", m.degenerate}};
}

template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs && static_cast<std::size_t>(w) < n; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void set_axis(ExperimentConfig& c, SweepAxis axis, Index value) {
  switch (axis) {
    case SweepAxis::kK: c.K = value; break;
    case SweepAxis::kNa: c.n_a = value; break;
    case SweepAxis::kNaSmote: c.n_a_smote = value; break;
    case SweepAxis::kDTilde: c.d_tilde = value; break;
  }
}

void write_scaling(const Session& s, const std::vector<ScalingTable>& tables) {
  CsvWriter csv({"config_hash", "method", "n_a", "fit_ms", "transform_ms"});
  json summary{{"config_hash", s.hash}, {"methods", json::array()}};
  for (const auto& t : tables) {
    for (const auto& p : t.points) {
      csv.cell(s.hash).cell(std::string(to_string(t.method)))
          .cell(static_cast<long long>(p.n_a)).cell(p.fit_ms).cell(p.transform_ms);
      csv.end_row();
    }
    for (const auto& w : t.warnings) std::cerr << "warning: " << w << "\n";
    summary["methods"].push_back({{"method", std::string(to_string(t.method))},
                                  {"fit_slope", t.fit_slope},
                                  {"transform_slope", t.transform_slope},
                                  {"warnings", t.warnings}});
  }
  csv.save(s.options.out / "bench.csv");
  write_text(s.options.out / "bench_summary.json", summary.dump(2) + "\n");
}

}  // namespace

int resolve_threads(const CommandOptions& options) {
  if (options.bench) return 1;
  if (const char* env = std::getenv("DC_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    require(end && *end == '\0' && v >= 1, ErrorCode::kConfig,
            std::string("DC_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<int>(v);
  }
  return 1;
}

RunManifest cmd_run(const AppConfig& config, const CommandOptions& options) {
  Session s = open_session("run", config, options);
  const ExperimentConfig& e = s.config.experiment;
  const DataSplits data = prepare_data(s.config.data, e.task);
  const ExperimentSummary summary =
      run_experiment(e, data.pool, data.anchor_source, s.options.jobs);

  CsvWriter trials({"config_hash", "trial", "seed", "method", "party", metric_name(e.task)});
  CsvWriter timings({"config_hash", "trial", "seed", "method", "fit_ms", "transform_ms"});
  for (const auto& t : summary.trials) {
    const auto trial = static_cast<long long>(t.seed - e.seed);
    const std::string method(to_string(t.method));
    for (std::size_t k = 0; k < t.per_party.size(); ++k) {
      trials.cell(s.hash).cell(trial).cell(static_cast<unsigned long long>(t.seed))
          .cell(method).cell(static_cast<long long>(k)).cell(t.per_party[k]);
      trials.end_row();
    }
    timings.cell(s.hash).cell(trial).cell(static_cast<unsigned long long>(t.seed))
        .cell(method).cell(t.fit_ms).cell(t.transform_ms);
    timings.end_row();
    s.manifest.trials.push_back({method, t.seed, t.per_party, t.mean, t.fit_ms, t.transform_ms});
  }
  trials.save(s.options.out / "trials.csv");
  timings.save(s.options.out / "timings.csv");

  json methods = json::array();
  for (const auto& m : summary.methods) {
    methods.push_back({{"method", std::string(to_string(m.method))},
                       {"metric", mean_ci_json(m.metric)},
                       {"fit_ms", mean_ci_json(m.fit_ms)},
                       {"transform_ms", mean_ci_json(m.transform_ms)}});
  }
  const json out{{"config_hash", s.hash},
                 {"metric", metric_name(e.task)},
                 {"n_seed", e.n_seed},
                 {"methods", methods}};
  write_text(s.options.out / "summary.json", out.dump(2) + "\n");
  return close_session(s);
}

RunManifest cmd_sweep(const AppConfig& config, const CommandOptions& options,
                      std::optional<SweepAxis> axis, std::optional<std::vector<Index>> values) {
  AppConfig c = config;
  if (axis) c.sweep.axis = *axis;
  if (values) c.sweep.values = *values;
  require(!c.sweep.values.empty(), ErrorCode::kConfig, "field 'sweep.values': no values to sweep");
  Session s = open_session("sweep", c, options);
  const ExperimentConfig& base = s.config.experiment;
  const DataSplits data = prepare_data(s.config.data, base.task);

  CsvWriter csv({"config_hash", "axis", "value", "method", "metric", "mean", "ci_half_width",
                 "sd", "n_seed"});
  const std::string axis_name(to_string(s.config.sweep.axis));
  for (Index v : s.config.sweep.values) {
    ExperimentConfig e = base;
    set_axis(e, s.config.sweep.axis, v);
    const ExperimentSummary summary = run_experiment(e, data.pool, data.anchor_source, s.options.jobs);
    for (const auto& m : summary.methods) {
      csv.cell(s.hash).cell(axis_name).cell(static_cast<long long>(v))
          .cell(std::string(to_string(m.method))).cell(std::string(metric_name(e.task)))
          .cell(m.metric.mean).cell(m.metric.half_width).cell(m.metric.sd)
          .cell(static_cast<long long>(e.n_seed));
      csv.end_row();
    }
  }
  csv.save(s.options.out / "sweep.csv");

  if (s.options.bench && s.config.sweep.axis == SweepAxis::kNa) {
    write_scaling(s, bench_scaling(base, data.pool, data.anchor_source, s.config.sweep.values));
  }
  return close_session(s);
}

RunManifest cmd_attack(const AppConfig& config, const CommandOptions& options) {
  Session s = open_session("attack", config, options);
  const ExperimentConfig& e = s.config.experiment;
  const DataSplits data = prepare_data(s.config.data, e.task);

  struct Job {
    ObfuscatorKind obfuscator;
    Index d_tilde;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto obf : s.config.attack.obfuscators)
    for (Index d : s.config.attack.d_tilde)
      for (Index r = 0; r < e.n_seed; ++r) jobs.push_back({obf, d, e.seed + static_cast<std::uint64_t>(r)});

  std::vector<AuditResult> results(jobs.size());
  parallel_for(jobs.size(), s.options.jobs, [&](std::size_t i) {
    AuditConfig audit = s.config.attack.audit;
    audit.obfuscator = jobs[i].obfuscator;
    audit.d_tilde = jobs[i].d_tilde;
    results[i] = run_audit(audit, data.pool, data.anchor_source, data.oracle, jobs[i].seed);
  });

  CsvWriter csv({"config_hash", "obfuscator", "d_tilde", "seed", "best", "best_score", "LR",
                 "PINV", "MLP", "warnings"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const AttackReport& rep = results[i].report;
    csv.cell(s.hash).cell(std::string(to_string(jobs[i].obfuscator)))
        .cell(static_cast<long long>(jobs[i].d_tilde))
        .cell(static_cast<unsigned long long>(jobs[i].seed))
        .cell(std::string(to_string(rep.best))).cell(rep.best_score);
    for (AttackKind kind : {AttackKind::kLr, AttackKind::kPinv, AttackKind::kMlp}) {
      std::string cell;
      for (const auto& o : rep.outcomes)
        if (o.kind == kind && o.score) cell = format_double(*o.score);
      csv.cell(cell);
    }
    std::string warnings;
    for (const auto& w : rep.warnings) warnings += (warnings.empty() ? "" : "; ") + w;
    csv.cell(warnings);
    csv.end_row();
  }
  csv.save(s.options.out / "attack.csv");
  return close_session(s);
}

RunManifest cmd_anchors(const AppConfig& config, const CommandOptions& options) {
  Session s = open_session("anchors", config, options);
  const ExperimentConfig& e = s.config.experiment;
  const DataSplits data = prepare_data(s.config.data, e.task);
  const AnchorSet sources =
      anchor_real_only(data.anchor_source.X, data.anchor_source.y, e.n_a_smote, e.seed);
  SmoteOptions smote;
  smote.n_a = e.n_a;
  smote.k_nn = e.k_nn;
  smote.balanced = e.balanced;
  smote.mode = e.task;
  const AnchorSet anchor = generate_anchor(sources.A, sources.y, smote, e.seed);

  std::vector<std::string> header{"config_hash", "row", "real", "y"};
  for (Index j = 0; j < anchor.A.cols(); ++j) header.push_back("x" + std::to_string(j));
  CsvWriter csv(header);
  for (Index i = 0; i < anchor.size(); ++i) {
    csv.cell(s.hash).cell(static_cast<long long>(i))
        .cell(static_cast<long long>(i < anchor.source_count ? 1 : 0)).cell(anchor.y(i));
    for (Index j = 0; j < anchor.A.cols(); ++j) csv.cell(anchor.A(i, j));
    csv.end_row();
  }
  csv.save(s.options.out / "anchors.csv");
  return close_session(s);
}

RunManifest cmd_bench(const AppConfig& config, const CommandOptions& options) {
  CommandOptions o = options;
  o.bench = true;
  Session s = open_session("bench", config, o);
  const DataSplits data = prepare_data(s.config.data, s.config.experiment.task);
  write_scaling(s, bench_scaling(s.config.experiment, data.pool, data.anchor_source,
                                 s.config.bench_n_a));
  return close_session(s);
}

}  // namespace dcki::app
