#ifndef STEREOKG_CSV_H_
#define STEREOKG_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace stereokg::csv {

using Row = std::vector<std::string>;

// RFC 4180: comma separated, fields optionally double-quoted, quotes escaped
// by doubling, quoted fields may contain commas and newlines.
std::vector<Row> parse(std::string_view content);

std::string format_row(const Row &fields);
std::string format(const std::vector<Row> &rows);

}  // namespace stereokg::csv

#endif  // STEREOKG_CSV_H_
