#include <algorithm>
#include <regex>

#include "frontend_util.hpp"
#include "iacsmell/frontends.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell {

namespace {

struct PairSyntax {
    std::string open;
    std::string close;
};

// first identifier-ish token of the interpolation body; filters after '|'
// are dropped
std::string extract_variable(std::string_view inner) {
    std::string body = trim(inner);
    std::size_t bar = body.find('|');
    if (bar != std::string::npos) body = trim(body.substr(0, bar));
    std::size_t i = 0;
    auto ident = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':';
    };
    while (i < body.size() && ident(body[i])) ++i;
    // keep a trailing ['index'] accessor so pillar['key'] stays identifiable
    if (i < body.size() && body[i] == '[') {
        std::size_t close = body.find(']', i);
        if (close != std::string::npos) i = close + 1;
    }
    std::string name = body.substr(0, i);
    return name.empty() ? body : name;
}

void scan_pairs(std::string_view slice, std::size_t base, const PairSyntax& pair,
                InterpolationScan& out, const detail::LineIndex& index) {
    std::size_t from = 0;
    while (true) {
        std::size_t open = slice.find(pair.open, from);
        if (open == std::string_view::npos) break;
        std::size_t inner_begin = open + pair.open.size();
        std::size_t close = slice.find(pair.close, inner_begin);
        if (close == std::string_view::npos) {
            out.diagnostics.push_back(
                {"unbalanced '" + pair.open + "' interpolation delimiter",
                 index.span(base + open, base + inner_begin)});
        } else {
            Interpolation interp;
            interp.span = index.span(base + open, base + close + pair.close.size());
            interp.variable = extract_variable(slice.substr(inner_begin, close - inner_begin));
            out.spans.push_back(std::move(interp));
        }
        from = open + pair.open.size();
    }
}

void scan_regex(std::string_view slice, std::size_t base, const std::regex& re, int name_group,
                InterpolationScan& out, const detail::LineIndex& index,
                const std::vector<Interpolation>& pair_spans) {
    auto begin = std::cregex_iterator(slice.data(), slice.data() + slice.size(), re);
    for (auto it = begin; it != std::cregex_iterator(); ++it) {
        std::size_t b = base + static_cast<std::size_t>(it->position(0));
        std::size_t e = b + static_cast<std::size_t>(it->length(0));
        bool covered = false;
        for (const auto& p : pair_spans) covered = covered || (b >= p.span.begin && e <= p.span.end);
        if (covered) continue;
        Interpolation interp;
        interp.span = index.span(b, e);
        std::string name = (*it)[name_group].matched ? it->str(name_group) : it->str(0);
        if (!name.empty() && name[0] == '$') name.erase(0, 1);
        interp.variable = name;
        out.spans.push_back(std::move(interp));
    }
}

}  // namespace

InterpolationScan interpolation_spans(const ConfigNode& node, std::string_view file_text,
                                      ToolKind tool) {
    InterpolationScan out;
    if (node.span.end > file_text.size() || node.span.begin > node.span.end) return out;
    std::string_view slice = file_text.substr(node.span.begin, node.span.end - node.span.begin);
    std::size_t base = node.span.begin;
    detail::LineIndex index(file_text);

    static const std::regex tf_var(R"(\bvar\.[A-Za-z_][A-Za-z0-9_]*)");
    static const std::regex puppet_var(R"(\$[A-Za-z_][A-Za-z0-9_:]*)");
    static const std::regex env_ref(R"(ENV\[\s*['"]?([A-Za-z_][A-Za-z0-9_]*)['"]?\s*\])");
    static const std::regex process_env(R"(process\.env\.([A-Za-z_][A-Za-z0-9_]*))");
    static const std::regex pulumi_config(
        R"(config\.(?:get|require)(?:Secret)?(?:Object|Number|Boolean)?\s*\(\s*['"]([^'"]+)['"]\s*\))");

    switch (tool) {
        case ToolKind::Ansible:
        case ToolKind::Saltstack:
            scan_pairs(slice, base, {"{{", "}}"}, out, index);
            break;
        case ToolKind::Terraform:
            scan_pairs(slice, base, {"${", "}"}, out, index);
            scan_regex(slice, base, tf_var, 0, out, index, out.spans);
            break;
        case ToolKind::Chef:
        case ToolKind::Vagrant:
            scan_pairs(slice, base, {"#{", "}"}, out, index);
            scan_regex(slice, base, env_ref, 1, out, index, out.spans);
            break;
        case ToolKind::Puppet:
            scan_pairs(slice, base, {"${", "}"}, out, index);
            scan_pairs(slice, base, {"#{", "}"}, out, index);
            scan_regex(slice, base, env_ref, 1, out, index, out.spans);
            scan_regex(slice, base, puppet_var, 0, out, index, out.spans);
            break;
        case ToolKind::Pulumi:
            scan_regex(slice, base, process_env, 1, out, index, out.spans);
            scan_regex(slice, base, pulumi_config, 1, out, index, out.spans);
            break;
    }

    std::sort(out.spans.begin(), out.spans.end(), [](const Interpolation& a, const Interpolation& b) {
        if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
        return a.span.end < b.span.end;
    });
    out.spans.erase(std::unique(out.spans.begin(), out.spans.end(),
                                [](const Interpolation& a, const Interpolation& b) {
                                    return a.span.begin == b.span.begin &&
                                           a.span.end == b.span.end;
                                }),
                    out.spans.end());
    return out;
}

}  // namespace iacsmell
