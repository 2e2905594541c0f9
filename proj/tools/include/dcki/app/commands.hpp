#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "dcki/app/config.hpp"
#include "dcki/app/manifest.hpp"

namespace dcki::app {

struct CommandOptions {
  std::filesystem::path out = "results";
  int jobs = 1;
  /// Single-threaded numeric kernels and no trial parallelism.
  bool bench = false;
  std::uint64_t seed_offset = 0;
};

/// Numeric thread count: 1 under --bench, else DC_THREADS when set, else 1.
int resolve_threads(const CommandOptions& options);

/// trials.csv, timings.csv, summary.json, manifest.json
RunManifest cmd_run(const AppConfig& config, const CommandOptions& options);

/// sweep.csv (and bench.csv for an n_a sweep under --bench). `axis` and
/// `values` override the config's sweep section.
RunManifest cmd_sweep(const AppConfig& config, const CommandOptions& options,
                      std::optional<SweepAxis> axis = std::nullopt,
                      std::optional<std::vector<Index>> values = std::nullopt);

/// attack.csv: one row per (obfuscator, d_tilde, seed).
RunManifest cmd_attack(const AppConfig& config, const CommandOptions& options);

/// anchors.csv for the first trial seed.
RunManifest cmd_anchors(const AppConfig& config, const CommandOptions& options);

/// bench.csv and bench_summary.json over config.bench_n_a.
RunManifest cmd_bench(const AppConfig& config, const CommandOptions& options);

}  // namespace dcki::app
