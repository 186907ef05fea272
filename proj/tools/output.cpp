#include "output.hpp"

#include <fstream>

#include <fmt/format.h>

#include "minmaxlab/error.hpp"
#include "minmaxlab/version.hpp"

namespace minmaxlab::cli {

std::string format_number(double x) { return fmt::format("{}", x); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(const std::string& config_hash, std::vector<std::string> header)
    : columns_(header.size()) {
  text_ = fmt::format("# minmaxlab {} config={}\n", kVersion, config_hash);
  row(header);
}

void CsvTable::row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_, ErrorKind::InvalidArgument, "CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_field(cells[i]);
  }
  text_ += '\n';
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw std::runtime_error(fmt::format("failed to write '{}'", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace minmaxlab::cli
