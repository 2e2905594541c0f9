#include "dcki/app/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "dcki/random.hpp"
#include "dcki/synthetic.hpp"

namespace dcki::app {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::optional<double> to_number(std::string cell) {
  const auto b = cell.find_first_not_of(" \t");
  const auto e = cell.find_last_not_of(" \t");
  if (b == std::string::npos) return std::nullopt;
  cell = cell.substr(b, e - b + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

std::uint32_t read_be32(const std::string& bytes, std::size_t offset, const std::string& source) {
  require(bytes.size() >= offset + 4, ErrorCode::kFormat,
          source + ": offset " + std::to_string(offset) + ": file truncated in header");
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i)
    v = (v << 8) | static_cast<unsigned char>(bytes[offset + i]);
  return v;
}

void check_magic(const std::string& bytes, std::uint32_t expected, const std::string& source) {
  const std::uint32_t magic = read_be32(bytes, 0, source);
  if (magic != expected) {
    char buf[96];
    std::snprintf(buf, sizeof buf, ": offset 0: bad magic number 0x%08x (expected 0x%08x)",
                  magic, expected);
    throw Error(ErrorCode::kFormat, source + buf);
  }
}

void check_payload(const std::string& bytes, std::size_t header, std::size_t count,
                   const std::string& source) {
  if (bytes.size() < header + count) {
    throw Error(ErrorCode::kFormat,
                source + ": offset " + std::to_string(bytes.size()) + ": file truncated, expected " +
                    std::to_string(header + count) + " bytes");
  }
}

}  // namespace

Dataset load_csv(const std::string& text, const LoadOptions& options, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool first = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_record(line);
    std::vector<double> values;
    std::optional<std::size_t> bad;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const auto v = to_number(cells[j]);
      if (!v) {
        bad = j;
        break;
      }
      values.push_back(*v);
    }
    if (first) {
      first = false;
      const bool header = options.header.value_or(bad.has_value());
      if (header) {
        width = cells.size();
        continue;
      }
    }
    if (bad) {
      throw Error(ErrorCode::kFormat, source + ":" + std::to_string(line_no) + ": column " +
                                          std::to_string(*bad + 1) + ": non-numeric cell '" +
                                          cells[*bad] + "'");
    }
    if (width == 0) width = values.size();
    require(values.size() == width, ErrorCode::kFormat,
            source + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) +
                " cells, found " + std::to_string(values.size()));
    rows.push_back(std::move(values));
  }
  require(!rows.empty(), ErrorCode::kFormat, source + ": no data rows");
  const auto n = static_cast<Index>(rows.size());
  const auto d = static_cast<Index>(width) - (options.label_column ? 1 : 0);
  require(d >= 1, ErrorCode::kFormat, source + ": no feature columns");
  Dataset out{Matrix(n, d), Targets::Zero(n)};
  for (Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (Index j = 0; j < d; ++j) out.X(i, j) = r[static_cast<std::size_t>(j)];
    if (options.label_column) out.y(i) = r.back();
  }
  return out;
}

Matrix parse_idx_images(const std::string& bytes, const std::string& source) {
  check_magic(bytes, 0x00000803u, source);
  const std::uint32_t n = read_be32(bytes, 4, source);
  const std::uint32_t rows = read_be32(bytes, 8, source);
  const std::uint32_t cols = read_be32(bytes, 12, source);
  const std::size_t d = static_cast<std::size_t>(rows) * cols;
  check_payload(bytes, 16, static_cast<std::size_t>(n) * d, source);
  Matrix X(n, static_cast<Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      X(static_cast<Index>(i), static_cast<Index>(j)) =
          static_cast<unsigned char>(bytes[16 + i * d + j]) / 255.0;
  return X;
}

Targets parse_idx_labels(const std::string& bytes, const std::string& source) {
  check_magic(bytes, 0x00000801u, source);
  const std::uint32_t n = read_be32(bytes, 4, source);
  check_payload(bytes, 8, n, source);
  Targets y(n);
  for (std::size_t i = 0; i < n; ++i)
    y(static_cast<Index>(i)) = static_cast<unsigned char>(bytes[8 + i]);
  return y;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const LoadOptions& options) {
  if (format == DataFormat::kCsv) return load_csv(read_file(path), options, path.string());
  Dataset out;
  out.X = parse_idx_images(read_file(path), path.string());
  if (options.labels_path.empty()) {
    out.y = Targets::Zero(out.X.rows());
  } else {
    out.y = parse_idx_labels(read_file(options.labels_path), options.labels_path.string());
    require(out.y.size() == out.X.rows(), ErrorCode::kShapeMismatch,
            "image and label files hold different counts");
  }
  return out;
}

void scale_features(Matrix& X, FeatureScaling scaling) {
  if (scaling == FeatureScaling::kNone || X.rows() == 0) return;
  for (Index j = 0; j < X.cols(); ++j) {
    auto col = X.col(j);
    if (scaling == FeatureScaling::kStandardize) {
      const double mean = col.mean();
      col.array() -= mean;
      const double sd = X.rows() > 1 ? std::sqrt(col.squaredNorm() / static_cast<double>(X.rows() - 1)) : 0.0;
      if (sd > 0.0) col /= sd;
    } else {
      const double lo = col.minCoeff(), hi = col.maxCoeff();
      col.array() -= lo;
      if (hi > lo) col /= (hi - lo);
    }
  }
}

DataSplits prepare_data(const DataConfig& data, TaskMode task) {
  DataSplits out;
  if (data.source == DataSource::kSynthetic) {
    // Three independent draws of the same family.
    const std::uint64_t s = data.data_seed * 3;
    out.pool = make_synthetic(data.synthetic, data.pool_size, s);
    out.anchor_source = make_synthetic(data.synthetic, data.anchor_source_size, s + 1);
    out.oracle = make_synthetic(data.synthetic, data.oracle_size, s + 2);
    return out;
  }
  LoadOptions load;
  load.header = data.header;
  load.label_column = data.label_column;
  load.labels_path = data.labels_path;
  Dataset all = load_dataset(data.path,
                             data.source == DataSource::kCsv ? DataFormat::kCsv : DataFormat::kIdx,
                             load);
  const FeatureScaling scaling = data.scaling.value_or(
      task == TaskMode::kRegression ? FeatureScaling::kStandardize : FeatureScaling::kNone);
  scale_features(all.X, scaling);

  const Index need = data.pool_size + data.anchor_source_size + data.oracle_size;
  require(all.rows() >= need, ErrorCode::kInsufficientPool,
          data.path + " holds " + std::to_string(all.rows()) + " rows, the split needs " +
              std::to_string(need));
  CounterRng rng = CounterRng::stream(data.data_seed, Purpose::kPartition, 1);
  const std::vector<Index> perm = random_permutation(all.rows(), rng);
  auto slice = [&](Index from, Index count) {
    return select_rows(all, std::vector<Index>(perm.begin() + from, perm.begin() + from + count));
  };
  out.pool = slice(0, data.pool_size);
  out.anchor_source = slice(data.pool_size, data.anchor_source_size);
  out.oracle = slice(data.pool_size + data.anchor_source_size, data.oracle_size);
  return out;
}

}  // namespace dcki::app
