#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcki/attacks.hpp"
#include "dcki/pipeline.hpp"
#include "dcki/synthetic.hpp"

namespace dcki::app {

enum class DataSource { kSynthetic, kCsv, kIdx };
enum class FeatureScaling { kNone, kStandardize, kUnit };

/// Where pool, anchor source and attack oracle rows come from. For file
/// sources the three sets are disjoint slices of one seeded permutation.
struct DataConfig {
  DataSource source = DataSource::kSynthetic;
  SyntheticSpec synthetic;
  std::string path;         // CSV file, or IDX images
  std::string labels_path;  // IDX labels
  std::optional<bool> header;  // CSV; unset = detect
  bool label_column = true;
  /// Unset follows the task: standardize for regression, none otherwise.
  std::optional<FeatureScaling> scaling;
  Index pool_size = 2000;
  Index anchor_source_size = 500;
  Index oracle_size = 500;
  std::uint64_t data_seed = 0;
};

enum class SweepAxis { kK, kNa, kNaSmote, kDTilde };

struct SweepConfig {
  SweepAxis axis = SweepAxis::kK;
  std::vector<Index> values;
};

struct AttackConfig {
  std::vector<ObfuscatorKind> obfuscators{ObfuscatorKind::kPca, ObfuscatorKind::kKpca};
  std::vector<Index> d_tilde{4};
  AuditConfig audit;
};

struct AppConfig {
  ExperimentConfig experiment;
  DataConfig data;
  SweepConfig sweep;
  std::vector<Index> bench_n_a{200, 400, 800};
  AttackConfig attack;
};

/// Parses a config document. Errors are kConfig with "<source>:<line>:"
/// prefixes where a line can be attributed.
AppConfig parse_config(const std::string& text, const std::string& source = "config");
AppConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form; parse_config(to_json(c).dump()) reproduces c.
nlohmann::json to_json(const AppConfig& config);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const AppConfig& config);

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);

}  // namespace dcki::app
