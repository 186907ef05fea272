#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace minmaxlab::cli {

/// Shortest round-trip decimal form, so reruns are byte-identical.
std::string format_number(double x);

/// RFC 4180 style: quote fields holding a comma, quote or line break.
std::string csv_field(const std::string& s);

class CsvTable {
public:
  /// First line is "# minmaxlab <version> config=<hash>".
  CsvTable(const std::string& config_hash, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

private:
  std::size_t columns_;
  std::string text_;
};

/// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace minmaxlab::cli
