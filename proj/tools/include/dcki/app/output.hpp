#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dcki::app {

/// Shortest-safe round-trip form: 17 significant digits.
std::string format_double(double v);

/// Quotes a cell when it holds a comma, quote or newline.
std::string csv_cell(const std::string& s);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(unsigned long long v);
  void end_row();

  [[nodiscard]] const std::string& text() const { return text_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t width_;
  std::size_t in_row_ = 0;
  std::string text_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dcki::app
