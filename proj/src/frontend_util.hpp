#pragma once

#include <string_view>
#include <vector>

#include "iacsmell/config_node.hpp"

namespace iacsmell::detail {

// Offset -> line/column mapping for one text buffer.
class LineIndex {
  public:
    explicit LineIndex(std::string_view text);
    SourceSpan span(std::size_t begin, std::size_t end) const;

  private:
    std::vector<std::size_t> line_starts_;
    void locate(std::size_t offset, int& line, int& col) const;
};

struct Line {
    std::size_t begin = 0;        // offset of first char
    std::size_t end = 0;          // offset past last char (excl. newline)
    std::size_t content_begin = 0;  // first non-blank char
    std::size_t content_end = 0;    // past last non-blank char, comments stripped
    int indent = 0;
    bool blank = true;  // nothing left after comment stripping
};

// Splits text into lines and strips trailing '#' comments that sit outside
// quotes. Used by the YAML and lexical frontends.
std::vector<Line> scan_lines(std::string_view text, bool strip_hash_comments);

ParsedFile parse_yaml(std::string_view text, ToolKind tool, std::string path);
ParsedFile parse_hcl(std::string_view text, ToolKind tool, std::string path);
ParsedFile parse_lexical(std::string_view text, ToolKind tool, std::string path);

}  // namespace iacsmell::detail
