#include <regex>

#include "frontend_util.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell::detail {

namespace {

struct Extraction {
    std::string key;
    std::string value;
    std::size_t begin;  // relative to line content
    std::size_t end;
};

std::string strip_quotes(std::string s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'' || s.front() == '`') &&
        s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

// Recognizable constructs in Ruby-like statements: assignments, resource
// calls with a quoted argument (plus an optional second argument taken as a
// version), hash-rocket attributes and symbol-key pairs. Quoted arguments
// are matched with a backreference so an embedded other-quote does not
// truncate the captured span.
void extract_ruby(const std::string& line, std::vector<Extraction>& out) {
    static const std::regex assignment(
        R"(^\s*([A-Za-z_][\w.]*(?:\[[^\]]*\])?)\s*=\s*([^=~<>].*)$)");
    static const std::regex call_with_arg(
        R"(^\s*([A-Za-z_][\w.]*)[ \t({]+(['"])((?:\\.|(?!\2).)*)\2)");
    static const std::regex second_arg(
        R"((['"])(?:\\.|(?!\1).)*\1\s*,\s*(['"])((?:\\.|(?!\2).)*)\2)");
    static const std::regex hash_rocket(
        R"(([A-Za-z_]\w*)\s*=>\s*(?:(['"])((?:\\.|(?!\2).)*)\2|([^,\r\n]+?))\s*,?\s*$)");
    static const std::regex symbol_pair(
        R"((?:^|[,({]\s*|\s)([a-z_]\w*):\s+(?:(['"])((?:\\.|(?!\2).)*)\2|([^,\s][^,]*)))");

    std::smatch m;
    if (std::regex_search(line, m, assignment)) {
        out.push_back({m[1].str(), strip_quotes(m[2].str()),
                       static_cast<std::size_t>(m.position(1)),
                       static_cast<std::size_t>(m.position(2) + m.length(2))});
        return;
    }
    if (std::regex_search(line, m, call_with_arg)) {
        out.push_back({m[1].str(), m[3].str(), static_cast<std::size_t>(m.position(1)),
                       static_cast<std::size_t>(m.position(0) + m.length(0))});
        std::smatch v;
        if (std::regex_search(line, v, second_arg)) {
            out.push_back({"version", v[3].str(), static_cast<std::size_t>(v.position(3)),
                           static_cast<std::size_t>(v.position(3) + v.length(3))});
        }
    }
    auto pick = [](const std::smatch& match, int quoted, int bare) {
        return match[quoted].matched ? match[quoted].str() : trim(match[bare].str());
    };
    auto begin = std::sregex_iterator(line.begin(), line.end(), hash_rocket);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        out.push_back({(*it)[1].str(), pick(*it, 3, 4),
                       static_cast<std::size_t>(it->position(1)),
                       static_cast<std::size_t>(it->position(0) + it->length(0))});
    }
    auto sym_begin = std::sregex_iterator(line.begin(), line.end(), symbol_pair);
    for (auto it = sym_begin; it != std::sregex_iterator(); ++it) {
        std::string key = (*it)[1].str();
        bool dup = false;
        for (const auto& e : out) dup = dup || (e.key == key);
        if (dup) continue;
        out.push_back({key, pick(*it, 3, 4), static_cast<std::size_t>(it->position(1)),
                       static_cast<std::size_t>(it->position(0) + it->length(0))});
    }
}

void extract_js(const std::string& line, std::vector<Extraction>& out) {
    static const std::regex import_from(R"(^\s*import\b[^'"]*['"]([^'"]+)['"])");
    // config.require(...) is a config lookup, not a module require
    static const std::regex require_call(
        R"((?:^|[^\w.])require\s*\(\s*(['"])((?:\\.|(?!\1).)*)\1)");
    static const std::regex property(
        R"(^\s*(?:const\s+|let\s+|var\s+|export\s+)?([A-Za-z_$][\w$.]*)\s*[:=]\s*([^=].*?);?\s*$)");

    std::smatch m;
    if (std::regex_search(line, m, import_from)) {
        out.push_back({"import", m[1].str(), 0,
                       static_cast<std::size_t>(m.position(1) + m.length(1))});
        return;
    }
    if (std::regex_search(line, m, require_call)) {
        out.push_back({"require", m[2].str(), static_cast<std::size_t>(m.position(0)),
                       static_cast<std::size_t>(m.position(2) + m.length(2))});
    }
    if (std::regex_search(line, m, property)) {
        out.push_back({m[1].str(), strip_quotes(m[2].str()),
                       static_cast<std::size_t>(m.position(1)),
                       static_cast<std::size_t>(m.position(2) + m.length(2))});
    }
}

}  // namespace

ParsedFile parse_lexical(std::string_view text, ToolKind tool, std::string path) {
    ParsedFile file;
    file.path = path;
    file.tool = tool;
    file.parse_mode = ParseMode::Lexical;
    file.text = std::string(text);

    LineIndex index(text);
    bool js_like = tool == ToolKind::Pulumi;
    // '#' starts comments in Ruby-like inputs; '//' in JS-like ones.
    std::vector<Line> lines = scan_lines(text, /*strip_hash_comments=*/!js_like);

    ConfigNode root;
    root.kind = NodeKind::Sequence;
    root.origin = tool;
    root.span = index.span(0, text.size());

    bool in_block_comment = false;
    for (const auto& line : lines) {
        if (line.blank) continue;
        std::string content(text.substr(line.content_begin, line.content_end - line.content_begin));
        if (js_like) {
            if (in_block_comment) {
                if (content.find("*/") != std::string::npos) in_block_comment = false;
                continue;
            }
            if (content.rfind("//", 0) == 0) continue;
            if (content.rfind("/*", 0) == 0) {
                if (content.find("*/") == std::string::npos) in_block_comment = true;
                continue;
            }
        } else {
            if (content.rfind("=begin", 0) == 0 || content.rfind("=end", 0) == 0) continue;
        }

        std::vector<Extraction> constructs;
        if (js_like) extract_js(content, constructs);
        else extract_ruby(content, constructs);

        if (constructs.empty()) {
            ConfigNode raw;
            raw.kind = NodeKind::RawSpan;
            raw.origin = tool;
            raw.value = content;
            raw.span = index.span(line.content_begin, line.content_end);
            root.children.push_back(std::move(raw));
        } else {
            ConfigNode stmt;
            stmt.kind = NodeKind::Mapping;
            stmt.origin = tool;
            stmt.span = index.span(line.content_begin, line.content_end);
            for (const auto& c : constructs) {
                ConfigNode child;
                child.kind = NodeKind::Scalar;
                child.origin = tool;
                child.key = c.key;
                child.value = c.value;
                std::size_t b = line.content_begin + std::min(c.begin, content.size());
                std::size_t e = line.content_begin + std::min(c.end, content.size());
                child.span = index.span(b, std::max(b, e));
                stmt.children.push_back(std::move(child));
            }
            root.children.push_back(std::move(stmt));
        }
    }
    file.root = std::move(root);
    return file;
}

}  // namespace iacsmell::detail
