#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dcki/app/config.hpp"
#include "dcki/common.hpp"

namespace dcki::app {

enum class DataFormat { kCsv, kIdx };

struct LoadOptions {
  std::optional<bool> header;  // CSV; unset = treat a non-numeric first row as header
  bool label_column = true;    // CSV: last column is the target
  std::filesystem::path labels_path;  // IDX labels file
};

/// CSV: comma separated, optional double-quoted cells. IDX: unsigned-byte
/// images (magic 0x00000803) scaled by 1/255, labels (0x00000801).
/// Without labels y is all zeros.
Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const LoadOptions& options = {});

Dataset load_csv(const std::string& text, const LoadOptions& options = {},
                 const std::string& source = "csv");

Matrix parse_idx_images(const std::string& bytes, const std::string& source = "idx");
Targets parse_idx_labels(const std::string& bytes, const std::string& source = "idx");

/// Per-column z-score (constant columns left centred) or [0, 1] min-max.
void scale_features(Matrix& X, FeatureScaling scaling);

/// Pool, anchor source and oracle sets described by `data`.
struct DataSplits {
  Dataset pool;
  Dataset anchor_source;
  Dataset oracle;
};

DataSplits prepare_data(const DataConfig& data, TaskMode task);

}  // namespace dcki::app
