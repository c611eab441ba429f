#include "stereokg/io.h"

#include <fstream>
#include <sstream>

#include "stereokg/errors.h"

namespace stereokg::io {

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<std::string> split_lines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t nl = content.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? content.size() : nl;
    std::string line(content.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> read_lines(const std::filesystem::path &path) {
  return split_lines(read_file(path));
}

std::string to_jsonl(const std::vector<Json> &records) {
  std::string out;
  for (const auto &r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

void require_file(const std::filesystem::path &path, std::string_view label) {
  if (!std::filesystem::exists(path)) {
    throw DataError(std::string(label) + ": missing file " + path.string());
  }
}

}  // namespace stereokg::io
