#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/config_node.hpp"

namespace iacsmell {

// Deterministic tool classification: filename conventions first, then
// content heuristics. Returns nullopt (and an explanation via error) when
// the file cannot be classified; callers then require an explicit tool flag.
std::optional<ToolKind> detect_tool(const std::string& path, std::string_view content,
                                    std::string* error = nullptr);

// Parses content into the common tree. Structured grammars cover ansible and
// saltstack (YAML subset) and terraform (HCL subset); the other tools get a
// lexical statement scan. A failed structured parse falls back to lexical
// with a diagnostic; a readable file never hard-fails.
ParsedFile parse(std::string_view content, ToolKind tool, std::string path = {});

struct Interpolation {
    SourceSpan span;
    std::string variable;
};

struct InterpolationScan {
    std::vector<Interpolation> spans;
    std::vector<Diagnostic> diagnostics;
};

// Every template-interpolation occurrence in the node's raw extent, per the
// tool's syntax ({{ }}, ${ }, #{ }, $var, ENV[, process.env., config.get/require).
InterpolationScan interpolation_spans(const ConfigNode& node, std::string_view file_text,
                                      ToolKind tool);

// Replaces invalid UTF-8 sequences with U+FFFD. Returns true when the input
// was already valid.
bool decode_utf8_lossy(std::string_view input, std::string& out);

}  // namespace iacsmell
