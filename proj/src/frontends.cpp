#include "iacsmell/frontends.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "frontend_util.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell {

namespace detail {

LineIndex::LineIndex(std::string_view text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') line_starts_.push_back(i + 1);
    }
}

void LineIndex::locate(std::size_t offset, int& line, int& col) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    std::size_t idx = static_cast<std::size_t>(it - line_starts_.begin()) - 1;
    line = static_cast<int>(idx) + 1;
    col = static_cast<int>(offset - line_starts_[idx]) + 1;
}

SourceSpan LineIndex::span(std::size_t begin, std::size_t end) const {
    SourceSpan s;
    s.begin = begin;
    s.end = end;
    locate(begin, s.start_line, s.start_col);
    locate(end, s.end_line, s.end_col);
    return s;
}

std::vector<Line> scan_lines(std::string_view text, bool strip_hash_comments) {
    std::vector<Line> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        Line line;
        line.begin = start;
        line.end = end > start && text[end - 1] == '\r' ? end - 1 : end;

        std::size_t i = start;
        while (i < line.end && (text[i] == ' ' || text[i] == '\t')) ++i;
        line.content_begin = i;
        line.indent = static_cast<int>(i - start);

        std::size_t content_end = line.end;
        if (strip_hash_comments) {
            bool in_single = false, in_double = false, escaped = false;
            for (std::size_t p = i; p < line.end; ++p) {
                char c = text[p];
                if (escaped) {
                    escaped = false;
                    continue;
                }
                if (in_double && c == '\\') {
                    escaped = true;
                    continue;
                }
                if (c == '\'' && !in_double) in_single = !in_single;
                else if (c == '"' && !in_single) in_double = !in_double;
                else if (c == '#' && !in_single && !in_double &&
                         (p == i || text[p - 1] == ' ' || text[p - 1] == '\t')) {
                    content_end = p;
                    break;
                }
            }
        }
        while (content_end > i && (text[content_end - 1] == ' ' || text[content_end - 1] == '\t'))
            --content_end;
        line.content_end = content_end;
        line.blank = line.content_begin >= line.content_end;
        lines.push_back(line);

        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return lines;
}

}  // namespace detail

bool decode_utf8_lossy(std::string_view input, std::string& out) {
    out.clear();
    out.reserve(input.size());
    bool valid = true;
    std::size_t i = 0;
    auto is_cont = [&](std::size_t k) {
        return k < input.size() && (static_cast<unsigned char>(input[k]) & 0xC0) == 0x80;
    };
    while (i < input.size()) {
        unsigned char c = static_cast<unsigned char>(input[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0) len = 4;

        bool ok = len > 0;
        for (std::size_t k = 1; ok && k < len; ++k) ok = is_cont(i + k);
        if (ok && len == 2 && c < 0xC2) ok = false;  // overlong
        if (ok) {
            out.append(input.substr(i, len));
            i += len;
        } else {
            out.append("\xEF\xBF\xBD");  // U+FFFD
            valid = false;
            ++i;
        }
    }
    return valid;
}

namespace {

std::string basename_of(const std::string& path) {
    std::size_t pos = path.find_last_of("/\\");
    return pos == std::string::npos ? path : path.substr(pos + 1);
}

std::string extension_of(const std::string& name) {
    std::size_t pos = name.rfind('.');
    return pos == std::string::npos ? "" : to_lower(name.substr(pos));
}

bool content_has(std::string_view content, const std::regex& re) {
    return std::regex_search(content.begin(), content.end(), re);
}

}  // namespace

std::optional<ToolKind> detect_tool(const std::string& path, std::string_view content,
                                    std::string* error) {
    static const std::regex ansible_markers(
        R"(^\s*-?\s*(hosts|tasks|pre_tasks|post_tasks|handlers|roles|no_log|become|gather_facts)\s*:)",
        std::regex::multiline);
    static const std::regex salt_markers(
        R"(\b(pkg|file|service|cmd|user|group|pip|archive)\.(installed|latest|managed|running|dead|run|wait|present|absent|extracted)\b)");
    static const std::regex terraform_markers(
        R"(^\s*(resource|provider|variable|module|data|output|terraform)\s+(\"|\{))",
        std::regex::multiline);
    static const std::regex vagrant_markers(R"(Vagrant\.configure|config\.vm\.)");
    static const std::regex chef_markers(
        R"(^\s*(package|cookbook_file|include_recipe|template|remote_file|execute|service)\s+['"]|node\[)",
        std::regex::multiline);
    static const std::regex pulumi_markers(
        R"(@pulumi/|pulumi\.Config|process\.env\.|import \* as pulumi)");

    std::string base = basename_of(path);
    std::string lower_base = to_lower(base);
    std::string ext = extension_of(lower_base);

    if (lower_base == "vagrantfile") return ToolKind::Vagrant;
    if (ext == ".tf" || ext == ".hcl") return ToolKind::Terraform;
    if (ext == ".pp") return ToolKind::Puppet;
    if (ext == ".sls") return ToolKind::Saltstack;
    if (lower_base == "pulumi.yaml" ||
        (lower_base.rfind("pulumi.", 0) == 0 && (ext == ".yaml" || ext == ".yml")))
        return ToolKind::Pulumi;
    if (ext == ".ts" || ext == ".js" || ext == ".mjs") return ToolKind::Pulumi;
    if (ext == ".rb") {
        if (content_has(content, vagrant_markers)) return ToolKind::Vagrant;
        return ToolKind::Chef;  // recipes/*.rb and friends
    }
    if (ext == ".yml" || ext == ".yaml") {
        if (content_has(content, ansible_markers)) return ToolKind::Ansible;
        if (content_has(content, salt_markers)) return ToolKind::Saltstack;
        if (error)
            *error = "cannot classify YAML file '" + path +
                     "'; pass an explicit --tool (ansible or saltstack)";
        return std::nullopt;
    }

    // no recognized name: fall back to content heuristics
    if (content_has(content, terraform_markers)) return ToolKind::Terraform;
    if (content_has(content, ansible_markers)) return ToolKind::Ansible;
    if (content_has(content, salt_markers)) return ToolKind::Saltstack;
    if (content_has(content, vagrant_markers)) return ToolKind::Vagrant;
    if (content_has(content, pulumi_markers)) return ToolKind::Pulumi;
    if (content_has(content, chef_markers)) return ToolKind::Chef;
    if (error)
        *error = "cannot classify '" + path + "'; pass an explicit --tool "
                 "(ansible|saltstack|terraform|chef|puppet|vagrant|pulumi)";
    return std::nullopt;
}

ParsedFile parse(std::string_view content, ToolKind tool, std::string path) {
    std::string normalized;
    bool clean = decode_utf8_lossy(content, normalized);

    ParsedFile file;
    switch (tool) {
        case ToolKind::Ansible:
        case ToolKind::Saltstack:
            file = detail::parse_yaml(normalized, tool, path);
            break;
        case ToolKind::Terraform:
            file = detail::parse_hcl(normalized, tool, path);
            break;
        default:
            file = detail::parse_lexical(normalized, tool, path);
            break;
    }
    if (!clean) {
        file.diagnostics.push_back({"invalid UTF-8 sequences replaced", {}});
    }
    return file;
}

}  // namespace iacsmell
