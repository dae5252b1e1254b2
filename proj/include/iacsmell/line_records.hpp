#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace iacsmell {

// Line-oriented record files: UTF-8, pipe-separated fields, '#' comments,
// blank lines ignored. Shared by the taxonomy, lexicon and advisory formats.
struct LineRecord {
    int line = 0;  // 1-based line number in the source
    std::vector<std::string> fields;
};

std::vector<LineRecord> parse_line_records(std::string_view text);
std::string read_text_file(const std::string& path);  // throws std::runtime_error

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);
std::vector<std::string> split(std::string_view text, char separator);

}  // namespace iacsmell
