#include <cctype>
#include <map>

#include "frontend_util.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell::detail {

namespace {

// Block-style YAML subset: mappings, sequences, flow scalars, quoted strings,
// literal/folded blocks, comments, scalar anchors/aliases, multi-document
// streams. Flow collections are captured as opaque scalars.
class YamlParser {
  public:
    YamlParser(std::string_view text, ToolKind tool, std::string path)
        : text_(text), index_(text), tool_(tool), path_(std::move(path)) {
        lines_ = scan_lines(text, /*strip_hash_comments=*/true);
        for (std::size_t i = 0; i < lines_.size(); ++i) {
            if (!lines_[i].blank) content_.push_back(i);
        }
    }

    ParsedFile run() {
        ParsedFile file;
        file.path = path_;
        file.tool = tool_;
        file.parse_mode = ParseMode::Structured;
        file.text = std::string(text_);

        std::vector<ConfigNode> docs;
        std::size_t guard = 0;
        while (!eof()) {
            if (is_marker(pos_, "---") || is_marker(pos_, "...")) {
                ++pos_;
                continue;
            }
            std::size_t before = pos_;
            docs.push_back(parse_block(line().indent));
            if (pos_ == before) {  // stuck: skip the line rather than loop
                diag("unparsed line", line().content_begin, line().content_end);
                ++pos_;
            }
            if (++guard > content_.size() + 8) break;
        }

        if (docs.empty()) {
            file.root = ConfigNode{};
            file.root.kind = NodeKind::Mapping;
            file.root.origin = tool_;
            file.root.span = index_.span(0, 0);
        } else if (docs.size() == 1) {
            file.root = std::move(docs[0]);
        } else {
            ConfigNode root;
            root.kind = NodeKind::Sequence;
            root.origin = tool_;
            root.span = index_.span(docs.front().span.begin, docs.back().span.end);
            root.children = std::move(docs);
            file.root = std::move(root);
        }
        file.diagnostics = std::move(diags_);
        return file;
    }

  private:
    std::string_view text_;
    LineIndex index_;
    ToolKind tool_;
    std::string path_;
    std::vector<Line> lines_;
    std::vector<std::size_t> content_;  // indices of non-blank lines
    std::size_t pos_ = 0;
    std::vector<Diagnostic> diags_;
    std::map<std::string, std::string> scalar_anchors_;

    bool eof() const { return pos_ >= content_.size(); }
    const Line& line() const { return lines_[content_[pos_]]; }
    std::string_view slice(std::size_t b, std::size_t e) const {
        return text_.substr(b, e - b);
    }

    void diag(const std::string& message, std::size_t b, std::size_t e) {
        diags_.push_back({message, index_.span(b, e)});
    }

    bool is_marker(std::size_t ci, std::string_view marker) const {
        const Line& l = lines_[content_[ci]];
        if (l.indent != 0) return false;
        std::string_view s = slice(l.content_begin, l.content_end);
        return s == marker || s.substr(0, marker.size() + 1) == std::string(marker) + " ";
    }

    bool is_dash(std::size_t ci) const {
        const Line& l = lines_[content_[ci]];
        if (l.content_begin >= l.content_end || text_[l.content_begin] != '-') return false;
        return l.content_begin + 1 == l.content_end || text_[l.content_begin + 1] == ' ';
    }

    ConfigNode make_scalar(std::size_t b, std::size_t e, std::string value) {
        ConfigNode node;
        node.kind = NodeKind::Scalar;
        node.origin = tool_;
        node.value = std::move(value);
        node.span = index_.span(b, e);
        return node;
    }

    static std::string unquote(std::string raw) {
        std::string s = trim(raw);
        if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
            char q = s.front();
            std::string inner = s.substr(1, s.size() - 2);
            std::string out;
            out.reserve(inner.size());
            for (std::size_t i = 0; i < inner.size(); ++i) {
                if (q == '"' && inner[i] == '\\' && i + 1 < inner.size()) {
                    char n = inner[i + 1];
                    if (n == '"' || n == '\\') {
                        out.push_back(n);
                        ++i;
                        continue;
                    }
                }
                if (q == '\'' && inner[i] == '\'' && i + 1 < inner.size() && inner[i + 1] == '\'') {
                    out.push_back('\'');
                    ++i;
                    continue;
                }
                out.push_back(inner[i]);
            }
            return out;
        }
        return s;
    }

    // offset of a ':' that separates key from value, or npos
    std::size_t find_key_colon(std::size_t begin, std::size_t end) const {
        bool in_single = false, in_double = false;
        for (std::size_t p = begin; p < end; ++p) {
            char c = text_[p];
            if (c == '\'' && !in_double) in_single = !in_single;
            else if (c == '"' && !in_single) in_double = !in_double;
            else if (c == ':' && !in_single && !in_double) {
                if (p + 1 == end || text_[p + 1] == ' ' || text_[p + 1] == '\t') return p;
            }
        }
        return std::string_view::npos;
    }

    ConfigNode parse_block(int indent) {
        if (!eof() && line().indent == indent && is_dash(pos_)) return parse_sequence(indent);
        return parse_mapping(indent, std::string_view::npos);
    }

    ConfigNode parse_sequence(int indent) {
        ConfigNode node;
        node.kind = NodeKind::Sequence;
        node.origin = tool_;
        std::size_t begin = line().content_begin;
        std::size_t end = line().content_end;
        while (!eof() && line().indent == indent && is_dash(pos_) && !is_marker(pos_, "---")) {
            ConfigNode item = parse_sequence_item();
            end = std::max(end, item.span.end);
            node.children.push_back(std::move(item));
        }
        node.span = index_.span(begin, end);
        return node;
    }

    ConfigNode parse_sequence_item() {
        const Line l = line();
        std::size_t rest = l.content_begin + 1;
        while (rest < l.content_end && text_[rest] == ' ') ++rest;

        if (rest >= l.content_end) {
            // bare dash: nested block on the following deeper lines
            ++pos_;
            if (!eof() && line().indent > l.indent) return parse_block(line().indent);
            return make_scalar(l.content_begin, l.content_begin + 1, "");
        }
        std::size_t colon = find_key_colon(rest, l.content_end);
        if (colon != std::string_view::npos) {
            int item_indent = static_cast<int>(rest - l.begin);
            return parse_mapping(item_indent, rest);
        }
        // scalar item (or nested inline dash, kept opaque)
        return parse_value_at(rest, l, /*owner_indent=*/l.indent);
    }

    ConfigNode parse_mapping(int indent, std::size_t first_offset) {
        ConfigNode node;
        node.kind = NodeKind::Mapping;
        node.origin = tool_;
        std::size_t begin = std::string_view::npos;
        std::size_t end = 0;
        bool first = true;
        while (!eof()) {
            const Line l = line();
            std::size_t offset = first && first_offset != std::string_view::npos
                                     ? first_offset
                                     : l.content_begin;
            if (!first || first_offset == std::string_view::npos) {
                if (l.indent != indent || is_dash(pos_) || is_marker(pos_, "---") ||
                    is_marker(pos_, "..."))
                    break;
            }
            std::size_t colon = find_key_colon(offset, l.content_end);
            if (colon == std::string_view::npos) {
                if (first) break;
                diag("expected 'key: value'", offset, l.content_end);
                ++pos_;
                continue;
            }
            ConfigNode entry = parse_mapping_entry(offset, colon, indent);
            if (begin == std::string_view::npos) begin = entry.span.begin;
            end = std::max(end, entry.span.end);
            node.children.push_back(std::move(entry));
            first = false;
        }
        if (begin == std::string_view::npos) {
            std::size_t at = eof() ? text_.size() : line().content_begin;
            if (!eof()) {
                diag("expected mapping content", at, line().content_end);
                ++pos_;
            }
            node.span = index_.span(at, at);
            return node;
        }
        node.span = index_.span(begin, end);
        return node;
    }

    ConfigNode parse_mapping_entry(std::size_t key_begin, std::size_t colon, int map_indent) {
        const Line l = line();
        std::string key = unquote(std::string(slice(key_begin, colon)));
        std::size_t v = colon + 1;
        while (v < l.content_end && (text_[v] == ' ' || text_[v] == '\t')) ++v;

        ConfigNode value_node;
        if (v >= l.content_end) {
            // nested block value (possibly a sequence at the same indent)
            ++pos_;
            if (!eof() && !is_marker(pos_, "---") && !is_marker(pos_, "...") &&
                (line().indent > map_indent ||
                 (line().indent == map_indent && is_dash(pos_)))) {
                value_node = line().indent > map_indent ? parse_block(line().indent)
                                                        : parse_sequence(map_indent);
            } else {
                value_node = make_scalar(colon + 1, colon + 1, "");
            }
        } else {
            value_node = parse_value_at(v, l, map_indent);
        }
        value_node.key = key;
        value_node.span = index_.span(key_begin, std::max(value_node.span.end, colon + 1));
        return value_node;
    }

    // Parses an inline value starting at offset v of the current line:
    // anchors/aliases/tags, block scalars, flow collections, plain scalars.
    ConfigNode parse_value_at(std::size_t v, const Line& l, int owner_indent) {
        std::string anchor;
        if (text_[v] == '&') {
            std::size_t a = v + 1;
            while (a < l.content_end && !std::isspace(static_cast<unsigned char>(text_[a]))) ++a;
            anchor = std::string(slice(v + 1, a));
            v = a;
            while (v < l.content_end && text_[v] == ' ') ++v;
            if (v >= l.content_end) {
                // anchored nested block; collection anchors are not expanded
                ++pos_;
                if (!eof() && line().indent > owner_indent) return parse_block(line().indent);
                return make_scalar(l.content_end, l.content_end, "");
            }
        }
        if (text_[v] == '*') {
            std::string name(trim(slice(v + 1, l.content_end)));
            ConfigNode node;
            auto it = scalar_anchors_.find(name);
            if (it != scalar_anchors_.end()) {
                node = make_scalar(v, l.content_end, it->second);
            } else {
                node = make_scalar(v, l.content_end, std::string(slice(v, l.content_end)));
                diag("alias '*" + name + "' does not resolve to a scalar anchor", v,
                     l.content_end);
            }
            ++pos_;
            return node;
        }

        std::string_view rest = slice(v, l.content_end);
        std::size_t indicator = 0;
        std::string tag;
        if (!rest.empty() && rest[0] == '!') {
            std::size_t t = 0;
            while (t < rest.size() && !std::isspace(static_cast<unsigned char>(rest[t]))) ++t;
            tag = std::string(rest.substr(0, t));
            while (t < rest.size() && rest[t] == ' ') ++t;
            indicator = t;
        }
        std::string_view after_tag = rest.substr(indicator);
        if (!after_tag.empty() && (after_tag[0] == '|' || after_tag[0] == '>')) {
            bool ok = true;
            for (std::size_t k = 1; k < after_tag.size(); ++k) {
                char c = after_tag[k];
                if (c != '+' && c != '-' && !std::isdigit(static_cast<unsigned char>(c))) {
                    ok = false;
                    break;
                }
            }
            if (ok) return parse_block_scalar(v, l, owner_indent, after_tag[0] == '>', tag);
        }
        if (!rest.empty() && indicator == 0 && (rest[0] == '[' || rest[0] == '{')) {
            return parse_flow(v, l);
        }

        ConfigNode node = make_scalar(v, l.content_end,
                                      (tag.empty() ? "" : tag + " ") +
                                          unquote(std::string(after_tag)));
        if (tag.empty()) node.value = unquote(std::string(rest));
        if (!anchor.empty()) scalar_anchors_[anchor] = node.value;
        ++pos_;
        return node;
    }

    ConfigNode parse_block_scalar(std::size_t v, const Line& l, int owner_indent, bool folded,
                                  const std::string& tag) {
        std::size_t raw = content_[pos_] + 1;  // first raw line after the indicator
        ++pos_;
        // Consume raw lines (comments inside a block are literal text).
        int block_indent = -1;
        std::vector<std::string> body;
        std::size_t end = l.content_end;
        std::size_t last_raw = raw;
        bool consumed = false;
        for (std::size_t i = raw; i < lines_.size(); ++i) {
            const Line& bl = lines_[i];
            bool raw_blank = true;
            for (std::size_t p = bl.begin; p < bl.end; ++p) {
                if (text_[p] != ' ' && text_[p] != '\t') {
                    raw_blank = false;
                    break;
                }
            }
            if (raw_blank) {
                body.emplace_back("");
                last_raw = i;
                continue;
            }
            if (bl.indent <= owner_indent) break;
            if (block_indent < 0) block_indent = bl.indent;
            std::size_t content_from = bl.begin + std::min<std::size_t>(block_indent, bl.indent);
            body.emplace_back(slice(content_from, bl.end));
            end = bl.end;
            last_raw = i;
            consumed = true;
        }
        while (!body.empty() && body.back().empty()) body.pop_back();

        std::string value = tag.empty() ? "" : tag + " " + std::string(1, folded ? '>' : '|');
        if (!value.empty() && !body.empty()) value += "\n";
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (i) value += folded ? (body[i].empty() ? "\n" : " ") : "\n";
            value += body[i];
        }
        if (consumed) {
            while (!eof() && content_[pos_] <= last_raw) ++pos_;
        }
        ConfigNode node = make_scalar(v, std::max(end, l.content_end), value);
        return node;
    }

    ConfigNode parse_flow(std::size_t v, const Line& l) {
        // Flow collections are opaque scalars; balance brackets across lines.
        int depth = 0;
        bool in_single = false, in_double = false;
        std::string value;
        std::size_t end = l.content_end;
        std::size_t scan_begin = v;
        std::size_t scan_end = l.content_end;
        std::size_t ci = pos_;
        for (int hops = 0; hops < 200; ++hops) {
            for (std::size_t p = scan_begin; p < scan_end; ++p) {
                char c = text_[p];
                if (c == '\'' && !in_double) in_single = !in_single;
                else if (c == '"' && !in_single) in_double = !in_double;
                else if (!in_single && !in_double) {
                    if (c == '[' || c == '{') ++depth;
                    else if (c == ']' || c == '}') --depth;
                }
            }
            if (!value.empty()) value += ' ';
            value += std::string(trim(slice(scan_begin, scan_end)));
            end = scan_end;
            if (depth <= 0) break;
            ++ci;
            if (ci >= content_.size()) {
                diag("unbalanced flow collection", v, end);
                break;
            }
            const Line& nl = lines_[content_[ci]];
            scan_begin = nl.content_begin;
            scan_end = nl.content_end;
        }
        pos_ = ci + 1;
        return make_scalar(v, end, value);
    }
};

}  // namespace

ParsedFile parse_yaml(std::string_view text, ToolKind tool, std::string path) {
    return YamlParser(text, tool, std::move(path)).run();
}

}  // namespace iacsmell::detail
