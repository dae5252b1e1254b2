#pragma once

#include <cstddef>
#include <string>

namespace iacsmell {

// Half-open byte range [begin, end) into the originating file text, with
// 1-based line/column coordinates derived from the same offsets.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;

    bool contains(const SourceSpan& other) const {
        return other.begin >= begin && other.end <= end;
    }
    bool operator==(const SourceSpan& other) const {
        return begin == other.begin && end == other.end;
    }
};

struct Diagnostic {
    std::string message;
    SourceSpan span;
};

}  // namespace iacsmell
