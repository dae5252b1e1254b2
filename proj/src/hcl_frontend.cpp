#include <cctype>

#include "frontend_util.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell::detail {

namespace {

// HCL subset: blocks with string/ident labels, attributes, strings with ${}
// interpolation, heredocs, comments. Expressions are captured as opaque
// scalar text.
class HclParser {
  public:
    HclParser(std::string_view text, ToolKind tool, std::string path)
        : text_(text), index_(text), tool_(tool), path_(std::move(path)) {}

    ParsedFile run() {
        ParsedFile file;
        file.path = path_;
        file.tool = tool_;
        file.parse_mode = ParseMode::Structured;
        file.text = std::string(text_);

        ConfigNode root;
        root.kind = NodeKind::Mapping;
        root.origin = tool_;
        root.children = parse_body('\0');
        std::size_t begin = root.children.empty() ? 0 : root.children.front().span.begin;
        std::size_t end = root.children.empty() ? 0 : root.children.back().span.end;
        root.span = index_.span(begin, end);
        file.root = std::move(root);
        file.diagnostics = std::move(diags_);
        return file;
    }

  private:
    std::string_view text_;
    LineIndex index_;
    ToolKind tool_;
    std::string path_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic> diags_;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return eof() ? '\0' : text_[pos_]; }

    void diag(const std::string& message, std::size_t b, std::size_t e) {
        diags_.push_back({message, index_.span(b, e)});
    }

    void skip_trivia(bool skip_newlines) {
        while (!eof()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || (skip_newlines && c == '\n')) {
                ++pos_;
            } else if (c == '#' || (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')) {
                while (!eof() && text_[pos_] != '\n') ++pos_;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                std::size_t close = text_.find("*/", pos_ + 2);
                pos_ = close == std::string_view::npos ? text_.size() : close + 2;
            } else {
                break;
            }
        }
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }

    std::string read_ident() {
        std::size_t start = pos_;
        while (!eof() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    // consumes a quoted string, honoring escapes and ${} nesting; returns the
    // unquoted content
    std::string read_string() {
        ++pos_;  // opening quote
        std::string out;
        int interp_depth = 0;
        while (!eof()) {
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                out.push_back(text_[pos_ + 1]);
                pos_ += 2;
                continue;
            }
            if (c == '$' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '{') ++interp_depth;
            if (c == '}' && interp_depth > 0) --interp_depth;
            if (c == '"' && interp_depth == 0) {
                ++pos_;
                return out;
            }
            if (c == '\n' && interp_depth == 0) {
                diag("unterminated string", pos_, pos_);
                return out;
            }
            out.push_back(c);
            ++pos_;
        }
        return out;
    }

    std::vector<ConfigNode> parse_body(char end_char) {
        std::vector<ConfigNode> nodes;
        while (true) {
            skip_trivia(true);
            if (eof()) break;
            if (end_char != '\0' && peek() == end_char) {
                ++pos_;
                break;
            }
            if (ident_start(peek())) {
                nodes.push_back(parse_item());
            } else {
                std::size_t bad = pos_;
                while (!eof() && text_[pos_] != '\n') ++pos_;
                diag("unexpected token", bad, pos_);
            }
        }
        return nodes;
    }

    ConfigNode parse_item() {
        std::size_t start = pos_;
        std::string name = read_ident();
        skip_trivia(false);

        if (peek() == '=') {
            ++pos_;
            skip_trivia(false);
            return parse_attribute(start, name);
        }

        std::vector<std::string> labels;
        while (!eof()) {
            if (peek() == '"') {
                labels.push_back(read_string());
                skip_trivia(false);
            } else if (ident_start(peek())) {
                labels.push_back(read_ident());
                skip_trivia(false);
            } else {
                break;
            }
        }
        if (peek() == '{') {
            ++pos_;
            ConfigNode node;
            node.kind = NodeKind::Mapping;
            node.origin = tool_;
            std::string key = name;
            for (const auto& label : labels) key += "/" + label;
            node.key = key;
            node.children = parse_body('}');
            node.span = index_.span(start, pos_);
            return node;
        }

        // neither attribute nor block: keep the line as a raw span
        std::size_t line_end = pos_;
        while (line_end < text_.size() && text_[line_end] != '\n') ++line_end;
        ConfigNode node;
        node.kind = NodeKind::RawSpan;
        node.origin = tool_;
        node.key = name;
        node.value = std::string(trim(text_.substr(start, line_end - start)));
        node.span = index_.span(start, line_end);
        diag("expected '=' or '{' after identifier", start, line_end);
        pos_ = line_end;
        return node;
    }

    ConfigNode parse_attribute(std::size_t start, const std::string& name) {
        ConfigNode node;
        node.kind = NodeKind::Scalar;
        node.origin = tool_;
        node.key = name;

        skip_trivia(false);
        if (peek() == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '<') {
            pos_ += 2;
            if (peek() == '-' || peek() == '~') ++pos_;
            std::string terminator = read_ident();
            while (!eof() && text_[pos_] != '\n') ++pos_;
            if (!eof()) ++pos_;
            std::size_t body_begin = pos_;
            std::size_t body_end = pos_;
            std::size_t end_of_terminator = pos_;
            while (!eof()) {
                std::size_t line_end = text_.find('\n', pos_);
                if (line_end == std::string_view::npos) line_end = text_.size();
                std::string line_text = trim(text_.substr(pos_, line_end - pos_));
                if (line_text == terminator) {
                    end_of_terminator = line_end;
                    pos_ = line_end == text_.size() ? line_end : line_end + 1;
                    break;
                }
                body_end = line_end;
                pos_ = line_end == text_.size() ? line_end : line_end + 1;
                end_of_terminator = pos_;
            }
            node.value = std::string(text_.substr(body_begin, body_end > body_begin
                                                                  ? body_end - body_begin
                                                                  : 0));
            node.span = index_.span(start, end_of_terminator);
            return node;
        }

        // expression runs to the end of line at bracket depth zero
        std::size_t expr_begin = pos_;
        int depth = 0;
        bool in_string = false;
        while (!eof()) {
            char c = text_[pos_];
            if (in_string) {
                if (c == '\\' && pos_ + 1 < text_.size()) {
                    pos_ += 2;
                    continue;
                }
                if (c == '"') in_string = false;
                ++pos_;
                continue;
            }
            if (c == '"') {
                in_string = true;
                ++pos_;
                continue;
            }
            if (c == '(' || c == '[' || c == '{') ++depth;
            if (c == ')' || c == ']' || c == '}') {
                if (depth == 0) break;  // enclosing block is closing
                --depth;
            }
            if (c == '\n' && depth == 0) break;
            if (c == '#' && depth == 0) break;
            ++pos_;
        }
        std::string raw = trim(text_.substr(expr_begin, pos_ - expr_begin));
        std::size_t expr_end = expr_begin + raw.size();
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
            std::string inner = raw.substr(1, raw.size() - 2);
            std::string out;
            for (std::size_t i = 0; i < inner.size(); ++i) {
                if (inner[i] == '\\' && i + 1 < inner.size()) {
                    out.push_back(inner[i + 1]);
                    ++i;
                } else {
                    out.push_back(inner[i]);
                }
            }
            node.value = out;
        } else {
            node.value = raw;
        }
        node.span = index_.span(start, expr_end);
        return node;
    }
};

}  // namespace

ParsedFile parse_hcl(std::string_view text, ToolKind tool, std::string path) {
    return HclParser(text, tool, std::move(path)).run();
}

}  // namespace iacsmell::detail
