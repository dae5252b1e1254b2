#include "iacsmell/lexicons.hpp"

#include <cctype>
#include <stdexcept>

#include "iacsmell/builtin_data.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell {

namespace {

const std::vector<std::string> kRegexSections = {
    "sensitive_keys", "dangerous_settings", "code_sinks",
    "sanitizers",     "secret_refs",        "placeholders",
};

const std::vector<std::string> kTokenSections = {
    "command_sinks", "path_keys", "vague_names", "log_sinks", "registry_allowlist",
};

const std::vector<std::string> kAllSections = {
    "sensitive_keys", "dangerous_settings", "command_sinks",       "code_sinks",
    "vague_names",    "sanitizers",         "path_keys",           "secret_refs",
    "placeholders",   "log_sinks",          "registry_allowlist",  "security_fix_keywords",
};

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string last_dotted_segment(const std::string& key) {
    std::size_t pos = key.rfind('.');
    return pos == std::string::npos ? key : key.substr(pos + 1);
}

}  // namespace

const std::vector<std::string>& Lexicons::section_names() { return kAllSections; }

const std::vector<std::string>& Lexicons::section(const std::string& name) const {
    static const std::vector<std::string> empty;
    auto it = raw_.find(name);
    return it == raw_.end() ? empty : it->second;
}

void Lexicons::compile() {
    for (const auto& name : kAllSections) {
        if (section(name).empty())
            throw std::runtime_error("lexicon section [" + name + "] is empty");
    }
    compiled_.clear();
    tokens_.clear();
    for (const auto& name : kRegexSections) {
        auto& list = compiled_[name];
        for (const auto& entry : section(name)) {
            try {
                list.emplace_back(entry, std::regex::ECMAScript | std::regex::icase);
            } catch (const std::regex_error& e) {
                throw std::runtime_error("lexicon section [" + name + "]: regex '" + entry +
                                         "' does not compile: " + e.what());
            }
        }
    }
    for (const auto& name : kTokenSections) {
        auto& set = tokens_[name];
        for (const auto& entry : section(name)) set.insert(to_lower(entry));
    }
}

Lexicons Lexicons::parse(std::string_view text, const std::string& source_name,
                         bool extend_defaults) {
    Lexicons lex;
    if (extend_defaults) lex.raw_ = defaults().raw_;

    std::string current;
    bool replaced_current = false;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view line_view = nl == std::string_view::npos
                                         ? text.substr(start)
                                         : text.substr(start, nl - start);
        ++line_no;
        std::string line = trim(line_view);
        if (!line.empty() && line[0] != '#') {
            if (line.front() == '[' && line.back() == ']') {
                current = trim(line.substr(1, line.size() - 2));
                replaced_current = false;
                bool known = false;
                for (const auto& name : kAllSections) known = known || name == current;
                if (!known) {
                    throw std::runtime_error(source_name + ": line " + std::to_string(line_no) +
                                             ": unknown lexicon section [" + current + "]");
                }
            } else if (current.empty()) {
                throw std::runtime_error(source_name + ": line " + std::to_string(line_no) +
                                         ": entry outside a [section] header");
            } else if (line == "replace") {
                lex.raw_[current].clear();
                replaced_current = true;
            } else {
                (void)replaced_current;
                lex.raw_[current].push_back(line);
            }
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    lex.compile();
    return lex;
}

Lexicons Lexicons::load_file(const std::string& path, bool extend_defaults) {
    return parse(read_text_file(path), path, extend_defaults);
}

const Lexicons& Lexicons::defaults() {
    static const Lexicons instance = [] {
        Lexicons lex;
        std::string_view text = builtin_lexicons_text();
        Lexicons parsed = parse(text, "<builtin lexicons>", /*extend_defaults=*/false);
        lex = parsed;
        return lex;
    }();
    return instance;
}

bool Lexicons::any_regex_match(const std::string& section_name, std::string_view text) const {
    auto it = compiled_.find(section_name);
    if (it == compiled_.end()) return false;
    std::string s(text);
    for (const auto& re : it->second) {
        if (std::regex_search(s, re)) return true;
    }
    return false;
}

bool Lexicons::matches_sensitive_key(std::string_view text) const {
    auto it = compiled_.find("sensitive_keys");
    if (it == compiled_.end()) return false;
    std::string s(text);
    for (const auto& re : it->second) {
        auto begin = std::sregex_iterator(s.begin(), s.end(), re);
        for (auto m = begin; m != std::sregex_iterator(); ++m) {
            std::size_t p = static_cast<std::size_t>(m->position(0));
            std::size_t q = p + static_cast<std::size_t>(m->length(0));
            if (m->length(0) == 0) continue;
            // Word-ish boundaries: a letter run only counts when it starts at a
            // non-alphanumeric edge or a camelCase transition, so NOPASSWD does
            // not trip the passwd pattern while dbPassword still does.
            bool ok_start = p == 0 || !is_word_char(s[p - 1]) ||
                            (std::islower(static_cast<unsigned char>(s[p - 1])) &&
                             std::isupper(static_cast<unsigned char>(s[p])));
            bool ok_end = q >= s.size() || !is_word_char(s[q]) ||
                          (std::isupper(static_cast<unsigned char>(s[q])) &&
                           std::islower(static_cast<unsigned char>(s[q - 1])));
            if (ok_start && ok_end) return true;
        }
    }
    return false;
}

bool Lexicons::matches_dangerous_setting(std::string_view text) const {
    return any_regex_match("dangerous_settings", text);
}
bool Lexicons::matches_code_sink(std::string_view text) const {
    return any_regex_match("code_sinks", text);
}
bool Lexicons::matches_sanitizer(std::string_view text) const {
    return any_regex_match("sanitizers", text);
}
bool Lexicons::matches_secret_ref(std::string_view text) const {
    return any_regex_match("secret_refs", text);
}
bool Lexicons::matches_placeholder(std::string_view text) const {
    return any_regex_match("placeholders", text);
}

bool Lexicons::is_command_sink_key(std::string_view key, std::string_view value) const {
    auto it = tokens_.find("command_sinks");
    if (it == tokens_.end()) return false;
    std::string lower_key = to_lower(trim(key));
    std::string lower_value = to_lower(trim(value));
    std::string last = last_dotted_segment(lower_key);
    for (const auto& entry : it->second) {
        // Entries are either a bare key or `key "value"`.
        std::size_t space = entry.find(' ');
        std::string entry_key = space == std::string::npos ? entry : entry.substr(0, space);
        std::string entry_value;
        if (space != std::string::npos) {
            entry_value = trim(entry.substr(space + 1));
            if (entry_value.size() >= 2 && entry_value.front() == '"' && entry_value.back() == '"')
                entry_value = entry_value.substr(1, entry_value.size() - 2);
        }
        if (entry_key != lower_key && entry_key != last) continue;
        if (!entry_value.empty() && entry_value != lower_value) continue;
        return true;
    }
    return false;
}

bool Lexicons::is_path_key(std::string_view key) const {
    auto it = tokens_.find("path_keys");
    if (it == tokens_.end()) return false;
    std::string lower = to_lower(trim(key));
    return it->second.count(lower) > 0 || it->second.count(last_dotted_segment(lower)) > 0;
}

bool Lexicons::is_vague_name(std::string_view name) const {
    auto it = tokens_.find("vague_names");
    return it != tokens_.end() && it->second.count(to_lower(trim(name))) > 0;
}

bool Lexicons::is_log_sink_key(std::string_view key) const {
    auto it = tokens_.find("log_sinks");
    if (it == tokens_.end()) return false;
    std::string lower = to_lower(trim(key));
    return it->second.count(lower) > 0 || it->second.count(last_dotted_segment(lower)) > 0;
}

bool Lexicons::host_allowlisted(std::string_view host) const {
    auto it = tokens_.find("registry_allowlist");
    if (it == tokens_.end()) return false;
    std::string lower = to_lower(trim(host));
    if (it->second.count(lower) > 0) return true;
    // subdomain match: api.github.com is covered by github.com
    for (const auto& entry : it->second) {
        if (lower.size() > entry.size() && lower.compare(lower.size() - entry.size(),
                                                         entry.size(), entry) == 0 &&
            lower[lower.size() - entry.size() - 1] == '.') {
            return true;
        }
    }
    return false;
}

const std::vector<std::string>& Lexicons::security_fix_keywords() const {
    return section("security_fix_keywords");
}

}  // namespace iacsmell
