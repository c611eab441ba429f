#ifndef STEREOKG_IO_H_
#define STEREOKG_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace stereokg::io {

using Json = nlohmann::ordered_json;

// Throws DataError naming the path when the file cannot be read.
std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view content);

// Splits on '\n' and drops a trailing '\r'. A final empty line is not
// reported.
std::vector<std::string> split_lines(std::string_view content);
std::vector<std::string> read_lines(const std::filesystem::path &path);

// One compact JSON document per line, '\n'-terminated.
std::string to_jsonl(const std::vector<Json> &records);

// Fails with DataError("<label>: missing file <path>") if absent.
void require_file(const std::filesystem::path &path, std::string_view label);

}  // namespace stereokg::io

#endif  // STEREOKG_IO_H_
