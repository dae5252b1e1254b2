#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/source_span.hpp"

namespace iacsmell {

enum class ToolKind {
    Ansible,
    Saltstack,
    Terraform,
    Chef,
    Puppet,
    Vagrant,
    Pulumi,
};

constexpr int kToolCount = 7;

const char* to_string(ToolKind tool);
std::optional<ToolKind> tool_from_string(std::string_view name);

enum class ParseMode { Structured, Lexical };

enum class NodeKind { Mapping, Sequence, Scalar, RawSpan };

// Tool-agnostic configuration tree node. Scalars and raw spans carry value
// text and no children; mapping children carry keys; sequence children do not.
struct ConfigNode {
    NodeKind kind = NodeKind::Mapping;
    std::optional<std::string> key;
    std::string value;
    std::vector<ConfigNode> children;
    SourceSpan span;
    ToolKind origin = ToolKind::Ansible;

    bool is_leaf() const { return kind == NodeKind::Scalar || kind == NodeKind::RawSpan; }
    const ConfigNode* child(std::string_view key_name) const;
};

struct ParsedFile {
    std::string path;
    ToolKind tool = ToolKind::Ansible;
    ParseMode parse_mode = ParseMode::Structured;
    ConfigNode root;
    std::vector<Diagnostic> diagnostics;
    // Normalized source text (UTF-8, invalid sequences replaced). All spans
    // index into this buffer.
    std::string text;

    std::string_view slice(const SourceSpan& span) const;
};

}  // namespace iacsmell
