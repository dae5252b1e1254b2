#include "iacsmell/config_node.hpp"

#include "iacsmell/line_records.hpp"

namespace iacsmell {

const char* to_string(ToolKind tool) {
    switch (tool) {
        case ToolKind::Ansible: return "ansible";
        case ToolKind::Saltstack: return "saltstack";
        case ToolKind::Terraform: return "terraform";
        case ToolKind::Chef: return "chef";
        case ToolKind::Puppet: return "puppet";
        case ToolKind::Vagrant: return "vagrant";
        case ToolKind::Pulumi: return "pulumi";
    }
    return "unknown";
}

std::optional<ToolKind> tool_from_string(std::string_view name) {
    std::string lower = to_lower(name);
    if (lower == "ansible") return ToolKind::Ansible;
    if (lower == "saltstack" || lower == "salt") return ToolKind::Saltstack;
    if (lower == "terraform") return ToolKind::Terraform;
    if (lower == "chef") return ToolKind::Chef;
    if (lower == "puppet") return ToolKind::Puppet;
    if (lower == "vagrant") return ToolKind::Vagrant;
    if (lower == "pulumi") return ToolKind::Pulumi;
    return std::nullopt;
}

const ConfigNode* ConfigNode::child(std::string_view key_name) const {
    for (const auto& c : children) {
        if (c.key && *c.key == key_name) return &c;
    }
    return nullptr;
}

std::string_view ParsedFile::slice(const SourceSpan& span) const {
    if (span.begin > text.size() || span.end > text.size() || span.begin > span.end) return {};
    return std::string_view(text).substr(span.begin, span.end - span.begin);
}

}  // namespace iacsmell
