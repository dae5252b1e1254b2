#pragma once

#include <map>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace iacsmell {

// Externally configurable keyword/pattern sets driving the predicates.
// Regex sections are matched case-insensitively; token sections compare
// case-insensitively after lowercasing.
class Lexicons {
  public:
    static const Lexicons& defaults();
    // Parses a lexicon file. When extend_defaults is true (the normal path)
    // user entries extend the bundled defaults per section; a `replace` line
    // directly under a section header swaps the section out instead.
    static Lexicons load_file(const std::string& path, bool extend_defaults = true);
    static Lexicons parse(std::string_view text, const std::string& source_name,
                          bool extend_defaults = true);

    const std::vector<std::string>& section(const std::string& name) const;

    // regex sections
    bool matches_sensitive_key(std::string_view text) const;        // word-bounded
    bool matches_dangerous_setting(std::string_view text) const;
    bool matches_code_sink(std::string_view text) const;
    bool matches_sanitizer(std::string_view text) const;
    bool matches_secret_ref(std::string_view text) const;
    bool matches_placeholder(std::string_view text) const;

    // token sections
    bool is_command_sink_key(std::string_view key, std::string_view value = {}) const;
    bool is_path_key(std::string_view key) const;
    bool is_vague_name(std::string_view name) const;
    bool is_log_sink_key(std::string_view key) const;
    bool host_allowlisted(std::string_view host) const;

    const std::vector<std::string>& security_fix_keywords() const;

    static const std::vector<std::string>& section_names();

  private:
    std::map<std::string, std::vector<std::string>> raw_;
    std::map<std::string, std::vector<std::regex>> compiled_;
    std::map<std::string, std::set<std::string>> tokens_;

    void compile();
    bool any_regex_match(const std::string& section, std::string_view text) const;
};

}  // namespace iacsmell
