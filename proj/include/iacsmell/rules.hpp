#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/predicates.hpp"
#include "iacsmell/taxonomy.hpp"

namespace iacsmell::rules {

enum class Severity { High, Medium, Low };
const char* to_string(Severity severity);
std::optional<Severity> severity_from_string(std::string_view name);

struct Rule {
    std::string id;           // equals the taxonomy category id
    std::string name;
    std::string cwe;          // primary CWE
    Severity severity;
    std::string condition;    // human-readable predicate composition
    std::string remediation;
    std::string notes;        // deviations / disambiguations
};

const std::vector<Rule>& registry();
const Rule* find_rule(std::string_view id);

struct UnknownRuleError : std::runtime_error {
    explicit UnknownRuleError(const std::string& msg) : std::runtime_error(msg) {}
};

// Rule card for docs and the taxonomy subcommand. Throws UnknownRuleError
// listing valid ids.
std::string explain(std::string_view rule_id);

struct Finding {
    std::string rule_id;
    std::string category;     // human label
    std::string cwe;
    Severity severity = Severity::Medium;
    std::string path;
    SourceSpan span;
    std::string snippet;      // exact source text at span
    std::string message;
    std::vector<Evidence> evidence;
    std::string fingerprint;  // stable hash of (rule_id, normalized snippet, path)
};

// One evaluation unit: a task-like region of the file (ansible task, salt
// state, terraform top-level block, lexical statement group).
struct EvalUnit {
    const ConfigNode* node = nullptr;          // structured subtree root
    std::vector<const ConfigNode*> members;    // lexical group lines (node == first)
    SourceSpan span;
};

std::vector<EvalUnit> evaluation_units(const ParsedFile& file);

// Evaluates the ten rules over every unit of the file. One finding per
// (unit, rule); results ordered by (path, span start, rule id).
std::vector<Finding> evaluate(const ParsedFile& file, const PredicateContext& ctx,
                              const std::set<std::string>* enabled_rules = nullptr);

std::string collapse_whitespace(std::string_view text);
std::string fingerprint(std::string_view rule_id, std::string_view snippet,
                        std::string_view path);

// Startup consistency check: the taxonomy's rule_bound ids must equal the
// registry ids. Throws std::runtime_error on mismatch.
void validate_against(const Taxonomy& taxonomy);

}  // namespace iacsmell::rules
