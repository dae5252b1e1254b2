#include "iacsmell/rules.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <sstream>

#include "iacsmell/line_records.hpp"

namespace iacsmell::rules {

namespace {

const std::vector<Rule>& build_registry() {
    static const std::vector<Rule> rules = {
        {"insecure-configuration-management", "Insecure Configuration Management", "CWE-306",
         Severity::High, "is_config_file(x) AND is_sensitive_setting(x)",
         "Replace dangerous settings with hardened values (PermitRootLogin no, remove "
         "NOPASSWD grants, restrictive file modes).",
         "Default-setting membership is folded into the dangerous-settings lexicon; the two "
         "are indistinguishable in practice."},
        {"insecure-dependency-management", "Insecure Dependency Management", "CWE-1104",
         Severity::Medium, "is_dependency(x) AND (lacks_version_locking(x) OR is_untrusted_source(x))",
         "Pin dependencies to exact versions and install from trusted registries over TLS "
         "with pinned refs.",
         "Condition uses OR rather than AND so unpinned packages from default registries are "
         "still reported."},
        {"insecure-input-handling", "Insecure Input Handling", "CWE-20", Severity::Medium,
         "is_user_input(x) AND is_unsanitized(x) AND reaches-sink-or-path(x) AND no more "
         "specific injection rule fired on the unit",
         "Validate or escape interpolated values before they reach commands or paths (quote "
         "filters, assert/validation constructs).",
         "Residual input rule: suppressed when path-traversal, command-injection or "
         "code-injection already explains the same node."},
        {"outdated-dependencies", "Outdated Dependencies", "CWE-1104", Severity::High,
         "is_dependency(x) AND is_outdated_version(x.version) AND "
         "has_known_vulnerabilities(x) is non-empty",
         "Upgrade to a release at or above the advisory's safe version.",
         "Alias: outdated-software-dependencies. Takes precedence over "
         "outdated-software-version when concrete vulnerability records exist."},
        {"path-traversal", "Path Traversal", "CWE-22", Severity::High,
         "is_file_path(x) AND is_user_input(x.value) AND is_unsanitized(x.value)",
         "Constrain user-supplied path components (validation, allowlists, basename "
         "extraction) before using them in file operations.",
         ""},
        {"command-injection", "Command Injection", "CWE-77", Severity::High,
         "is_command_sink(x) = os-command AND is_user_input(x) AND is_unsanitized(x)",
         "Quote or validate interpolated values used in shell/command invocations.",
         "Shares its condition with code-injection; disambiguated by sink kind "
         "(OS command vs interpreter)."},
        {"code-injection", "Code Injection", "CWE-94", Severity::High,
         "is_command_sink(x) = interpreter AND is_user_input(x) AND is_unsanitized(x)",
         "Never evaluate user input as code; remove eval/pipe-lookup constructs or use "
         "static expressions.",
         "Shares its condition with command-injection; disambiguated by sink kind."},
        {"outdated-software-version", "Outdated Software Version", "CWE-1104", Severity::Medium,
         "is_dependency(x) AND is_outdated_version(x.version) AND advisory evidence is "
         "EOL-only",
         "Move off end-of-life software to a maintained release.",
         "Counterpart of outdated-dependencies for EOL/age-only advisory evidence; at most "
         "one of the two fires per node."},
        {"inadequate-naming-convention", "Inadequate Naming Convention", "CWE-710",
         Severity::Low, "named-resource(x) AND follows_nonstandard_convention(x)",
         "Use descriptive, consistently styled resource names.",
         "Reason codes (vague-word, too-short, mixed-style) stand in for the undefined "
         "readability predicate."},
        {"sensitive-information-exposure", "Sensitive Information Exposure", "CWE-256",
         Severity::High, "is_sensitive_data(x.name-or-content) AND is_exposed(x)",
         "Move secrets into a vault/secret store; never write them into plaintext files or "
         "logs.",
         ""},
    };
    return rules;
}

}  // namespace

const char* to_string(Severity severity) {
    switch (severity) {
        case Severity::High: return "high";
        case Severity::Medium: return "medium";
        case Severity::Low: return "low";
    }
    return "unknown";
}

std::optional<Severity> severity_from_string(std::string_view name) {
    std::string lower = to_lower(name);
    if (lower == "high") return Severity::High;
    if (lower == "medium") return Severity::Medium;
    if (lower == "low") return Severity::Low;
    return std::nullopt;
}

const std::vector<Rule>& registry() { return build_registry(); }

const Rule* find_rule(std::string_view id) {
    for (const auto& rule : registry()) {
        if (rule.id == id) return &rule;
    }
    return nullptr;
}

std::string explain(std::string_view rule_id) {
    const Rule* rule = find_rule(rule_id);
    if (!rule) {
        std::ostringstream msg;
        msg << "unknown rule '" << rule_id << "'; valid ids:";
        for (const auto& r : registry()) msg << "\n  " << r.id;
        throw UnknownRuleError(msg.str());
    }
    std::ostringstream out;
    out << rule->id << " (" << rule->name << ")\n";
    out << "  cwe:         " << rule->cwe << " <https://cwe.mitre.org/data/definitions/"
        << rule->cwe.substr(4) << ".html>\n";
    out << "  severity:    " << to_string(rule->severity) << "\n";
    out << "  condition:   " << rule->condition << "\n";
    out << "  remediation: " << rule->remediation << "\n";
    if (!rule->notes.empty()) out << "  notes:       " << rule->notes << "\n";
    return out.str();
}

void validate_against(const Taxonomy& taxonomy) {
    std::vector<std::string> bound = taxonomy.rule_bound_ids();
    std::sort(bound.begin(), bound.end());
    std::vector<std::string> registered;
    for (const auto& rule : registry()) registered.push_back(rule.id);
    std::sort(registered.begin(), registered.end());
    if (bound != registered) {
        std::ostringstream msg;
        msg << "taxonomy rule_bound ids do not match the rule registry;";
        msg << " taxonomy:";
        for (const auto& id : bound) msg << ' ' << id;
        msg << " registry:";
        for (const auto& id : registered) msg << ' ' << id;
        throw std::runtime_error(msg.str());
    }
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = true;  // also trims leading space
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(c);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string fingerprint(std::string_view rule_id, std::string_view snippet,
                        std::string_view path) {
    // FNV-1a, stable across machines
    std::uint64_t hash = 14695981039346656037ull;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            hash ^= c;
            hash *= 1099511628211ull;
        }
        hash ^= 0xff;
        hash *= 1099511628211ull;
    };
    mix(rule_id);
    mix(collapse_whitespace(snippet));
    mix(path);
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

namespace {

bool is_play_mapping(const ConfigNode& node) {
    if (node.kind != NodeKind::Mapping) return false;
    return node.child("hosts") || node.child("tasks") || node.child("pre_tasks") ||
           node.child("post_tasks") || node.child("handlers") || node.child("roles");
}

void expand_tasks(const ConfigNode& list, std::vector<EvalUnit>& units) {
    for (const auto& task : list.children) {
        bool expanded = false;
        for (const char* block_key : {"block", "rescue", "always"}) {
            if (const ConfigNode* block = task.child(block_key)) {
                if (block->kind == NodeKind::Sequence) {
                    expand_tasks(*block, units);
                    expanded = true;
                }
            }
        }
        if (!expanded) units.push_back({&task, {&task}, task.span});
    }
}

void ansible_units(const ParsedFile& file, std::vector<EvalUnit>& units) {
    std::vector<const ConfigNode*> items;
    if (file.root.kind == NodeKind::Sequence) {
        for (const auto& item : file.root.children) items.push_back(&item);
    } else {
        items.push_back(&file.root);
    }
    static const std::vector<std::string> task_lists = {"tasks", "pre_tasks", "post_tasks",
                                                        "handlers"};
    for (const ConfigNode* item : items) {
        if (is_play_mapping(*item)) {
            EvalUnit header;
            for (const auto& child : item->children) {
                bool is_list = false;
                for (const auto& k : task_lists) is_list = is_list || (child.key && *child.key == k);
                if (is_list && child.kind == NodeKind::Sequence) {
                    expand_tasks(child, units);
                } else if (!is_list) {
                    if (header.members.empty()) header.span = child.span;
                    header.members.push_back(&child);
                    header.span.begin = std::min(header.span.begin, child.span.begin);
                    header.span.end = std::max(header.span.end, child.span.end);
                }
            }
            if (!header.members.empty()) {
                header.node = header.members.front();
                units.push_back(std::move(header));
            }
        } else {
            units.push_back({item, {item}, item->span});
        }
    }
}

// statement depth change for lexical grouping (do/end, braces, heredocs)
struct GroupScanner {
    std::string pending_heredoc;

    int delta(const std::string& line) {
        std::string stripped = strip_strings(line);
        int d = 0;
        for (char c : stripped) {
            if (c == '{') ++d;
            if (c == '}') --d;
        }
        static const std::regex do_tail(R"(\bdo(\s*\|[^|]*\|)?\s*$)");
        static const std::regex block_head(R"(^(if|unless|case|def|class|module|begin)\b)");
        static const std::regex end_word(R"(\bend\b)");
        if (std::regex_search(stripped, do_tail)) ++d;
        if (std::regex_search(stripped, block_head)) ++d;
        auto ends = std::sregex_iterator(stripped.begin(), stripped.end(), end_word);
        for (auto it = ends; it != std::sregex_iterator(); ++it) --d;
        static const std::regex heredoc(R"(<<[-~]?([A-Z_][A-Z0-9_]*))");
        std::smatch m;
        if (std::regex_search(stripped, m, heredoc)) pending_heredoc = m[1].str();
        return d;
    }

    static std::string strip_strings(const std::string& line) {
        std::string out;
        out.reserve(line.size());
        char quote = 0;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quote) {
                if (c == '\\') {
                    ++i;
                } else if (c == quote) {
                    quote = 0;
                }
                continue;
            }
            if (c == '"' || c == '\'' || c == '`') {
                quote = c;
                continue;
            }
            out.push_back(c);
        }
        return out;
    }
};

void lexical_units(const ParsedFile& file, std::vector<EvalUnit>& units) {
    GroupScanner scanner;
    EvalUnit current;
    int depth = 0;
    std::string heredoc;
    for (const auto& node : file.root.children) {
        std::string line = node.kind == NodeKind::RawSpan ? node.value
                                                          : std::string(file.slice(node.span));
        if (current.members.empty()) current.span = node.span;
        current.members.push_back(&node);
        current.span.begin = std::min(current.span.begin, node.span.begin);
        current.span.end = std::max(current.span.end, node.span.end);

        if (!heredoc.empty()) {
            if (trim(line) == heredoc) heredoc.clear();
            continue;
        }
        depth += scanner.delta(line);
        if (!scanner.pending_heredoc.empty()) {
            heredoc = scanner.pending_heredoc;
            scanner.pending_heredoc.clear();
            continue;
        }
        if (depth <= 0) {
            depth = 0;
            current.node = current.members.front();
            units.push_back(std::move(current));
            current = EvalUnit{};
        }
    }
    if (!current.members.empty()) {
        current.node = current.members.front();
        units.push_back(std::move(current));
    }
}

}  // namespace

std::vector<EvalUnit> evaluation_units(const ParsedFile& file) {
    std::vector<EvalUnit> units;
    switch (file.tool) {
        case ToolKind::Ansible:
            ansible_units(file, units);
            break;
        case ToolKind::Saltstack:
        case ToolKind::Terraform:
            if (file.root.kind == NodeKind::Mapping && !file.root.children.empty()) {
                for (const auto& child : file.root.children)
                    units.push_back({&child, {&child}, child.span});
            } else if (!file.root.children.empty() || file.root.is_leaf()) {
                units.push_back({&file.root, {&file.root}, file.root.span});
            }
            break;
        default:
            lexical_units(file, units);
            break;
    }
    return units;
}

namespace {

void walk_nodes(const ConfigNode& node, std::vector<const ConfigNode*>& out) {
    out.push_back(&node);
    for (const auto& child : node.children) walk_nodes(child, out);
}

struct UnitEvaluator {
    const ParsedFile& file;
    const PredicateContext& ctx;
    std::vector<Diagnostic>* diags;
    std::map<std::string, Finding> fired;

    void fire(const std::string& rule_id, const SourceSpan& anchor, std::string message,
              std::vector<Evidence> evidence) {
        if (fired.count(rule_id)) return;  // one finding per (unit, rule)
        const Rule* rule = find_rule(rule_id);
        Finding finding;
        finding.rule_id = rule_id;
        finding.category = rule->name;
        finding.cwe = rule->cwe;
        finding.severity = rule->severity;
        finding.path = file.path;
        finding.span = anchor;
        finding.snippet = std::string(file.slice(anchor));
        finding.message = std::move(message);
        finding.evidence = std::move(evidence);
        finding.fingerprint = fingerprint(rule_id, finding.snippet, file.path);
        fired.emplace(rule_id, std::move(finding));
    }

    void run(const EvalUnit& unit) {
        std::vector<const ConfigNode*> nodes;
        for (const ConfigNode* member : unit.members) walk_nodes(*member, nodes);

        dependencies(unit);
        configuration(unit);
        injections(nodes);
        naming(unit, nodes);
        exposure(unit);
    }

    void dependencies(const EvalUnit& unit) {
        std::vector<DependencyRef> deps;
        for (const ConfigNode* member : unit.members) {
            for (auto& dep : collect_dependencies(*member, ctx)) {
                bool seen = false;
                for (const auto& d : deps) seen = seen || d.span.begin == dep.span.begin;
                if (!seen) deps.push_back(std::move(dep));
            }
        }
        for (const auto& dep : deps) {
            auto outdated = is_outdated_version(dep, ctx, diags);
            auto vulns = has_known_vulnerabilities(dep, ctx);
            std::string shown = dep.name + (dep.version ? " " + *dep.version : "");
            if (outdated && !vulns.empty()) {
                fire("outdated-dependencies", dep.version_span,
                     "dependency '" + shown + "' has known vulnerabilities (" +
                         vulns.front().advisory_id + ")",
                     {{dep.span, std::string(file.slice(dep.span))}});
            } else if (outdated) {
                fire("outdated-software-version", dep.version_span,
                     "dependency '" + shown + "' is outdated or end-of-life (" +
                         outdated->advisory_id + ")",
                     {{dep.span, std::string(file.slice(dep.span))}});
            } else if (lacks_version_locking(dep) || is_untrusted_source(dep, ctx)) {
                std::string why = lacks_version_locking(dep)
                                      ? "is not locked to a version"
                                      : "comes from an untrusted source '" + *dep.source + "'";
                fire("insecure-dependency-management", dep.span,
                     "dependency '" + dep.name + "' " + why,
                     {{dep.span, std::string(file.slice(dep.span))}});
            }
        }
    }

    void configuration(const EvalUnit& unit) {
        std::vector<Evidence> config_evidence;
        std::vector<Evidence> setting_evidence;
        for (const ConfigNode* member : unit.members) {
            auto icf = is_config_file(*member, ctx);
            config_evidence.insert(config_evidence.end(), icf.evidence.begin(),
                                   icf.evidence.end());
            auto iss = is_sensitive_setting(*member, ctx);
            setting_evidence.insert(setting_evidence.end(), iss.evidence.begin(),
                                    iss.evidence.end());
        }
        if (!config_evidence.empty() && !setting_evidence.empty()) {
            std::vector<Evidence> all = setting_evidence;
            all.insert(all.end(), config_evidence.begin(), config_evidence.end());
            fire("insecure-configuration-management", setting_evidence.front().span,
                 "dangerous configuration setting: " + setting_evidence.front().text, all);
        }
    }

    void injections(const std::vector<const ConfigNode*>& nodes) {
        for (const ConfigNode* n : nodes) {
            Evidence sink_evidence;
            auto sink = is_command_sink(*n, ctx, &sink_evidence);
            if (!sink) continue;
            auto input = is_user_input(*n, ctx);
            if (!input || !is_unsanitized_in(*n, nullptr, ctx)) continue;
            std::vector<Evidence> evidence{{n->span, std::string(file.slice(n->span))}};
            for (const auto& interp : input.inputs)
                evidence.push_back({interp.span, std::string(file.slice(interp.span))});
            if (*sink == SinkKind::Interpreter) {
                fire("code-injection", sink_evidence.span,
                     "unsanitized input reaches a code evaluation sink", evidence);
            } else {
                const Interpolation* direct = nullptr;
                for (const auto& interp : input.inputs) {
                    if (!direct && interpolation_is_direct(interp, *n, ctx)) direct = &interp;
                }
                if (direct) {
                    fire("command-injection", n->span,
                         "unsanitized input '" + direct->variable +
                             "' flows into an OS command",
                         evidence);
                }
            }
        }
        for (const ConfigNode* n : nodes) {
            auto path = is_file_path(*n, ctx);
            if (!path) continue;
            auto input = is_user_input(*n, ctx);
            if (!input || !is_unsanitized_in(*n, nullptr, ctx)) continue;
            std::vector<Evidence> evidence = path.evidence;
            fire("path-traversal", n->span,
                 "file path '" + (n->key ? *n->key : std::string("value")) +
                     "' takes unsanitized user input '" + input.inputs.front().variable + "'",
                 evidence);
        }
        // residual input rule, suppressed by the specific ones above
        if (fired.count("command-injection") || fired.count("code-injection") ||
            fired.count("path-traversal"))
            return;
        for (const ConfigNode* n : nodes) {
            bool reaches = is_command_sink(*n, ctx).has_value() ||
                           (n->key && ctx.lexicons->is_path_key(*n->key));
            if (!reaches) continue;
            auto input = is_user_input(*n, ctx);
            if (!input || !is_unsanitized_in(*n, nullptr, ctx)) continue;
            fire("insecure-input-handling", n->span,
                 "user input '" + input.inputs.front().variable +
                     "' is processed without validation",
                 {{n->span, std::string(file.slice(n->span))}});
        }
    }

    void naming(const EvalUnit& unit, const std::vector<const ConfigNode*>& nodes) {
        auto check = [&](const std::string& name, const SourceSpan& span) {
            auto conv = follows_nonstandard_convention(name, ctx);
            if (conv) {
                fire("inadequate-naming-convention", span,
                     "resource name '" + name + "' is non-descriptive (" + conv.reason + ")",
                     {{span, std::string(file.slice(span))}});
            }
        };
        for (const ConfigNode* n : nodes) {
            if (!n->is_leaf() || !n->key) continue;
            std::string key = to_lower(*n->key);
            bool named = ctx.lexicons->is_path_key(key) || key == "register";
            if (file.parse_mode == ParseMode::Lexical) {
                named = named || key == "file" || key == "template" || key == "directory" ||
                        key == "define";
            }
            if (named && !n->value.empty()) check(trim(n->value), n->span);
        }
        // block labels / state ids name resources too
        if (unit.node && unit.node->key && file.parse_mode == ParseMode::Structured &&
            file.tool != ToolKind::Ansible) {
            std::string key = *unit.node->key;
            std::size_t slash = key.find_last_of('/');
            if (file.tool == ToolKind::Terraform) {
                // only labeled blocks (resource/<type>/<label>) carry a name
                if (slash != std::string::npos) check(key.substr(slash + 1), unit.node->span);
            } else {
                check(slash == std::string::npos ? key : key.substr(slash + 1),
                      unit.node->span);
            }
        }
    }

    void exposure(const EvalUnit& unit) {
        for (const ConfigNode* member : unit.members) {
            auto expo = is_exposed(*member, ctx);
            if (expo) {
                fire("sensitive-information-exposure", expo.evidence.front().span,
                     std::string("sensitive data exposed (") + to_string(*expo.kind) +
                         "): " + collapse_whitespace(expo.evidence.front().text),
                     expo.evidence);
                return;
            }
        }
    }
};

}  // namespace

std::vector<Finding> evaluate(const ParsedFile& file, const PredicateContext& ctx,
                              const std::set<std::string>* enabled_rules) {
    std::vector<Finding> findings;
    std::vector<Diagnostic> scratch;
    for (const EvalUnit& unit : evaluation_units(file)) {
        UnitEvaluator eval{file, ctx, &scratch, {}};
        eval.run(unit);
        for (auto& [id, finding] : eval.fired) findings.push_back(std::move(finding));
    }
    // suppression is computed on the full rule set; filtering happens after
    if (enabled_rules && !enabled_rules->empty()) {
        std::erase_if(findings, [&](const Finding& f) { return !enabled_rules->count(f.rule_id); });
    }
    std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        if (a.path != b.path) return a.path < b.path;
        if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
        return a.rule_id < b.rule_id;
    });
    return findings;
}

}  // namespace iacsmell::rules
