#pragma once

#include <string>
#include <vector>

namespace buoy {

/// Float with 9 significant digits, as used in every CSV file.
std::string format_real(double value);

/// Accumulates rows in memory; save() writes them atomically.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  const std::string& text() const noexcept { return text_; }

  /// Writes to `path` through a temporary file and a rename.
  void save(const std::string& path) const;

 private:
  std::size_t columns_;
  std::string text_;
};

/// Writes `text` to `path` through a temporary file in the same directory.
void write_atomic(const std::string& path, const std::string& text);

}  // namespace buoy
