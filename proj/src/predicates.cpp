#include "iacsmell/predicates.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <regex>

#include "frontend_util.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell {

namespace {

void walk(const ConfigNode& node, const std::function<void(const ConfigNode&)>& fn) {
    fn(node);
    for (const auto& child : node.children) walk(child, fn);
}

std::string_view raw_slice(const ConfigNode& node, const PredicateContext& ctx) {
    return ctx.file ? ctx.file->slice(node.span) : std::string_view{};
}

std::string last_key_segment(const std::string& key) {
    std::size_t pos = key.rfind('.');
    return pos == std::string::npos ? key : key.substr(pos + 1);
}

bool is_bare_path(std::string_view value) {
    if (value.size() < 2) return false;
    if (value.find('/') == std::string_view::npos) return false;
    return value.find(' ') == std::string_view::npos &&
           value.find('\t') == std::string_view::npos;
}

bool is_config_target_path(std::string_view value) {
    static const std::regex shape(
        R"(^(/etc/|/usr/local/etc/).*|.*\.conf$|.*sshd_config$|.*/sudoers[^/]*$|^sudoers.*)",
        std::regex::icase);
    std::string s = trim(value);
    if (!is_bare_path(s)) return false;
    return std::regex_match(s, shape);
}

const std::vector<std::string>& config_constructs() {
    static const std::vector<std::string> keys = {
        "lineinfile", "blockinfile", "file.managed", "template", "ini_file",
        "file.blockreplace",
    };
    return keys;
}

bool is_config_construct_key(const std::string& key) {
    std::string lower = to_lower(key);
    std::string last = last_key_segment(lower);
    for (const auto& k : config_constructs()) {
        if (lower == k || last == k) return true;
    }
    return false;
}

// evidence narrowed to the matching line of a (possibly multi-line) extent
template <typename Matcher>
void match_lines(const ConfigNode& node, const PredicateContext& ctx, Matcher matches,
                 std::vector<Evidence>& out) {
    std::string_view slice = raw_slice(node, ctx);
    if (slice.empty()) return;
    detail::LineIndex index(ctx.file->text);
    std::size_t start = 0;
    while (start <= slice.size()) {
        std::size_t nl = slice.find('\n', start);
        std::size_t end = nl == std::string_view::npos ? slice.size() : nl;
        std::string_view line = slice.substr(start, end - start);
        std::string trimmed = trim(line);
        if (!trimmed.empty() && matches(trimmed)) {
            std::size_t lead = line.find_first_not_of(" \t");
            std::size_t b = node.span.begin + start + (lead == std::string_view::npos ? 0 : lead);
            out.push_back({index.span(b, b + trimmed.size()), trimmed});
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
}

bool value_is_pure_interpolation(const ConfigNode& node, const PredicateContext& ctx) {
    auto scan = interpolation_spans(node, ctx.file->text, ctx.file->tool);
    if (scan.spans.size() != 1) return false;
    std::string value = trim(node.value);
    std::string span_text = trim(ctx.file->slice(scan.spans[0].span));
    return !value.empty() && span_text == value;
}

std::string url_host(std::string_view url) {
    std::size_t scheme = url.find("://");
    if (scheme == std::string_view::npos) return {};
    std::size_t host_begin = scheme + 3;
    std::size_t host_end = url.find_first_of("/:?#", host_begin);
    if (host_end == std::string_view::npos) host_end = url.size();
    std::string host(url.substr(host_begin, host_end - host_begin));
    std::size_t at = host.find('@');
    if (at != std::string::npos) host = host.substr(at + 1);
    return host;
}

struct PkgModule {
    const char* key;
    const char* ecosystem;
};

const PkgModule kAnsiblePkgModules[] = {
    {"apt", "apt"},     {"yum", "yum"},   {"dnf", "yum"},       {"pip", "pip"},
    {"gem", "gem"},     {"npm", "npm"},   {"package", "generic"}, {"apk", "generic"},
    {"zypper", "generic"}, {"pacman", "generic"}, {"homebrew", "generic"},
};

const PkgModule* ansible_pkg_module(const std::string& key) {
    std::string last = to_lower(last_key_segment(key));
    for (const auto& m : kAnsiblePkgModules) {
        if (last == m.key) return &m;
    }
    return nullptr;
}

bool is_floating_token(std::string_view value) {
    std::string v = to_lower(trim(value));
    return v == "latest" || v == "*" || v == "present" || v == "installed";
}

// ansible inline argument strings: "name=apache2 state=present"
std::map<std::string, std::string> parse_kv_args(std::string_view text) {
    std::map<std::string, std::string> out;
    static const std::regex kv(R"(([A-Za-z_]\w*)=((['"])[^'"]*\3|\S+))");
    auto begin = std::cregex_iterator(text.data(), text.data() + text.size(), kv);
    for (auto it = begin; it != std::cregex_iterator(); ++it) {
        std::string value = it->str(2);
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\''))
            value = value.substr(1, value.size() - 2);
        out[to_lower(it->str(1))] = value;
    }
    return out;
}

std::optional<DependencyRef> ansible_dependency(const ConfigNode& task,
                                                const PredicateContext& ctx);
std::optional<DependencyRef> salt_dependency(const ConfigNode& state,
                                             const PredicateContext& ctx);
std::optional<DependencyRef> terraform_dependency(const ConfigNode& block,
                                                  const PredicateContext& ctx);
std::optional<DependencyRef> lexical_dependency(const ConfigNode& node,
                                                const PredicateContext& ctx);

std::optional<DependencyRef> ansible_dependency(const ConfigNode& node,
                                                const PredicateContext& ctx) {
    (void)ctx;
    const ConfigNode* module = nullptr;
    const PkgModule* kind = nullptr;
    if (node.key) {
        if ((kind = ansible_pkg_module(*node.key)) != nullptr) module = &node;
    }
    if (!module && node.kind == NodeKind::Mapping) {
        for (const auto& child : node.children) {
            if (!child.key) continue;
            if ((kind = ansible_pkg_module(*child.key)) != nullptr) {
                module = &child;
                break;
            }
        }
    }
    if (!module || !kind) return std::nullopt;

    DependencyRef dep;
    dep.ecosystem = kind->ecosystem;
    dep.span = module->span;
    dep.version_span = module->span;

    if (module->kind == NodeKind::Mapping) {
        if (const ConfigNode* name = module->child("name")) {
            dep.name = trim(name->value);
            dep.span = name->span;
            dep.version_span = name->span;
        }
        if (const ConfigNode* version = module->child("version")) {
            dep.version = trim(version->value);
            dep.version_span = version->span;
            if (is_floating_token(*dep.version) && to_lower(*dep.version) == "latest")
                dep.floating = true;
        }
        if (const ConfigNode* state = module->child("state")) {
            if (to_lower(trim(state->value)) == "latest") dep.floating = true;
        }
        if (const ConfigNode* source = module->child("source")) {
            if (!source->value.empty()) dep.source = trim(source->value);
        }
        if (const ConfigNode* repo = module->child("repo")) {
            if (!repo->value.empty()) dep.source = trim(repo->value);
        }
    } else {
        auto args = parse_kv_args(module->value);
        auto name_it = args.find("name");
        if (name_it == args.end()) name_it = args.find("pkg");
        if (name_it != args.end()) dep.name = name_it->second;
        if (args.count("version")) dep.version = args["version"];
        if (args.count("state") && args["state"] == "latest") dep.floating = true;
    }
    if (dep.name.empty()) return std::nullopt;

    // name=version forms: openssl=1.0.1, django==3.2, rails:5.0
    static const std::regex inline_version(R"(^([^=<>!~\s]+)\s*(==|=|>=|<=|~=)\s*(\S+)$)");
    std::smatch m;
    if (!dep.version && std::regex_match(dep.name, m, inline_version)) {
        dep.name = m[1].str();
        if (m[2].str() == "==" || m[2].str() == "=") dep.version = m[3].str();
        else dep.version = m[2].str() + m[3].str();
    }
    return dep;
}

std::optional<DependencyRef> salt_dependency(const ConfigNode& node,
                                             const PredicateContext& ctx) {
    (void)ctx;
    if (node.kind != NodeKind::Mapping || !node.key) return std::nullopt;
    static const std::regex state_fn(R"(^(pkg|pip|gem|npm)\.(installed|latest)$)");
    for (const auto& child : node.children) {
        if (!child.key) continue;
        std::smatch m;
        std::string key = to_lower(*child.key);
        if (!std::regex_match(key, m, state_fn)) continue;

        DependencyRef dep;
        std::string eco = m[1].str();
        dep.ecosystem = eco == "pkg" ? "generic" : eco;
        dep.name = *node.key;
        dep.span = node.span;
        dep.version_span = child.span;
        if (m[2].str() == "latest") dep.floating = true;

        // args are a sequence of one-pair mappings
        auto visit_pair = [&](const ConfigNode& pair) {
            if (!pair.key) return;
            std::string k = to_lower(*pair.key);
            if (k == "name" && !pair.value.empty()) {
                dep.name = trim(pair.value);
                dep.span = pair.span;
            } else if (k == "version" && !pair.value.empty()) {
                dep.version = trim(pair.value);
                dep.version_span = pair.span;
            } else if ((k == "sources" || k == "source") && !pair.value.empty()) {
                dep.source = trim(pair.value);
            }
        };
        for (const auto& arg : child.children) {
            if (arg.kind == NodeKind::Mapping) {
                for (const auto& pair : arg.children) visit_pair(pair);
            } else {
                visit_pair(arg);
            }
        }
        return dep;
    }
    return std::nullopt;
}

std::optional<DependencyRef> terraform_dependency(const ConfigNode& node,
                                                  const PredicateContext& ctx) {
    (void)ctx;
    if (node.kind != NodeKind::Mapping || !node.key) return std::nullopt;
    std::string key = *node.key;
    bool is_module = key.rfind("module/", 0) == 0;
    bool is_provider = key.rfind("provider/", 0) == 0;
    if (!is_module && !is_provider) return std::nullopt;

    DependencyRef dep;
    dep.ecosystem = "terraform";
    dep.name = key.substr(key.find('/') + 1);
    dep.span = node.span;
    dep.version_span = node.span;
    if (const ConfigNode* source = node.child("source")) {
        dep.source = trim(source->value);
        dep.span = source->span;
        dep.version_span = source->span;
    }
    if (const ConfigNode* version = node.child("version")) {
        dep.version = trim(version->value);
        dep.version_span = version->span;
    }
    // a pinned git ref counts as the version for git-sourced modules
    if (!dep.version && dep.source) {
        static const std::regex ref_pin(R"([?&]ref=([^&\s"']+))");
        std::smatch m;
        if (std::regex_search(*dep.source, m, ref_pin)) dep.version = m[1].str();
    }
    return dep;
}

std::optional<DependencyRef> lexical_dependency(const ConfigNode& node,
                                                const PredicateContext& ctx) {
    if (node.kind != NodeKind::Mapping) {
        // pulumi import/require raw handling happens on construct nodes
        return std::nullopt;
    }
    static const std::vector<std::pair<std::string, std::string>> kRubyPkg = {
        {"package", "generic"}, {"apt_package", "apt"},   {"yum_package", "yum"},
        {"gem", "gem"},         {"gem_package", "gem"},   {"chef_gem", "gem"},
        {"pip", "pip"},
    };

    const ConfigNode* name_node = nullptr;
    std::string ecosystem;
    for (const auto& child : node.children) {
        if (!child.key) continue;
        std::string key = to_lower(last_key_segment(*child.key));
        for (const auto& [pkg_key, eco] : kRubyPkg) {
            if (key == pkg_key && !child.value.empty()) {
                name_node = &child;
                ecosystem = eco;
                break;
            }
        }
        if (child.key && to_lower(*child.key) == "config.vm.box" && !child.value.empty()) {
            name_node = &child;
            ecosystem = "box";
        }
        if ((key == "import" || key == "require") && !child.value.empty()) {
            name_node = &child;
            ecosystem = "npm";
        }
        if (name_node) break;
    }
    if (!name_node) return std::nullopt;

    DependencyRef dep;
    dep.name = trim(name_node->value);
    dep.ecosystem = ecosystem;
    dep.span = name_node->span;
    dep.version_span = name_node->span;

    // same-line version (gem 'rails', '5.0.0')
    if (const ConfigNode* version = node.child("version")) {
        dep.version = trim(version->value);
        dep.version_span = version->span;
    }

    // forward sibling scan until the statement group closes
    if (ctx.file) {
        const auto& siblings = ctx.file->root.children;
        std::size_t start = siblings.size();
        for (std::size_t i = 0; i < siblings.size(); ++i) {
            if (&siblings[i] == &node) {
                start = i + 1;
                break;
            }
        }
        int scanned = 0;
        for (std::size_t i = start; i < siblings.size() && scanned < 30; ++i, ++scanned) {
            const ConfigNode& sib = siblings[i];
            if (sib.kind == NodeKind::RawSpan) {
                std::string v = trim(sib.value);
                if (v == "end" || v == "}") break;
                continue;
            }
            for (const auto& child : sib.children) {
                if (!child.key) continue;
                std::string key = to_lower(last_key_segment(*child.key));
                if ((key == "version" || key == "config.vm.box_version" ||
                     key == "box_version") &&
                    !dep.version && !child.value.empty()) {
                    dep.version = trim(child.value);
                    dep.version_span = child.span;
                } else if (key == "ensure" && !dep.version) {
                    std::string v = to_lower(trim(child.value));
                    if (v == "latest") dep.floating = true;
                    else if (v != "installed" && v != "present" && v != "absent" &&
                             v != "purged" && !v.empty()) {
                        dep.version = trim(child.value);
                        dep.version_span = child.span;
                    }
                } else if ((key == "source" || key == "box_url" ||
                            key == "config.vm.box_url") &&
                           !dep.source && !child.value.empty()) {
                    dep.source = trim(child.value);
                }
                if (child.key && to_lower(*child.key) == "config.vm.box") {
                    scanned = 1000;  // next box declaration ends the scan
                    break;
                }
            }
        }
    }
    return dep;
}

}  // namespace

const char* to_string(ExposureKind kind) {
    switch (kind) {
        case ExposureKind::LiteralValue: return "literal-value";
        case ExposureKind::PlaintextFile: return "plaintext-file";
        case ExposureKind::Logged: return "logged";
    }
    return "unknown";
}

std::string_view node_raw_text(const ConfigNode& node, const PredicateContext& ctx) {
    return raw_slice(node, ctx);
}

PredicateResult is_config_file(const ConfigNode& node, const PredicateContext& ctx) {
    PredicateResult result;
    walk(node, [&](const ConfigNode& n) {
        if (n.key && is_config_construct_key(*n.key)) {
            result.evidence.push_back({n.span, std::string(raw_slice(n, ctx).substr(
                                                   0, std::min<std::size_t>(
                                                          raw_slice(n, ctx).size(), 80)))});
        }
        if (n.is_leaf() && is_config_target_path(n.value)) {
            result.evidence.push_back({n.span, std::string(raw_slice(n, ctx))});
        }
    });
    result.value = !result.evidence.empty();
    return result;
}

PredicateResult is_sensitive_setting(const ConfigNode& node, const PredicateContext& ctx) {
    PredicateResult result;
    if (!ctx.lexicons) return result;
    walk(node, [&](const ConfigNode& n) {
        if (!n.is_leaf()) return;
        match_lines(n, ctx,
                    [&](const std::string& line) {
                        return ctx.lexicons->matches_dangerous_setting(line);
                    },
                    result.evidence);
    });
    // dedupe evidence from nested extents
    std::sort(result.evidence.begin(), result.evidence.end(),
              [](const Evidence& a, const Evidence& b) { return a.span.begin < b.span.begin; });
    result.evidence.erase(std::unique(result.evidence.begin(), result.evidence.end(),
                                      [](const Evidence& a, const Evidence& b) {
                                          return a.span.begin == b.span.begin;
                                      }),
                          result.evidence.end());
    result.value = !result.evidence.empty();
    return result;
}

std::optional<DependencyRef> is_dependency(const ConfigNode& node, const PredicateContext& ctx) {
    ToolKind tool = ctx.file ? ctx.file->tool : node.origin;
    switch (tool) {
        case ToolKind::Ansible: return ansible_dependency(node, ctx);
        case ToolKind::Saltstack: return salt_dependency(node, ctx);
        case ToolKind::Terraform: return terraform_dependency(node, ctx);
        default: return lexical_dependency(node, ctx);
    }
}

std::vector<DependencyRef> collect_dependencies(const ConfigNode& node,
                                                const PredicateContext& ctx) {
    std::vector<DependencyRef> deps;
    walk(node, [&](const ConfigNode& n) {
        auto dep = is_dependency(n, ctx);
        if (!dep) return;
        for (const auto& existing : deps) {
            if (existing.span.begin == dep->span.begin) return;
        }
        deps.push_back(std::move(*dep));
    });
    return deps;
}

bool lacks_version_locking(const DependencyRef& dep) {
    if (dep.floating) return true;
    if (!dep.version) return true;
    std::string v = trim(*dep.version);
    if (v.empty() || is_floating_token(v)) return true;
    // unbounded ranges: >=, >, ~>, ^, ~ without an upper pin
    static const std::regex unbounded(R"(^(>=|>|~>|\^|~)\s*[0-9])");
    if (std::regex_search(v, unbounded)) {
        bool has_upper = v.find('<') != std::string::npos;
        return !has_upper;
    }
    return false;
}

bool is_untrusted_source(const DependencyRef& dep, const PredicateContext& ctx) {
    if (!dep.source) return false;  // default registry
    std::string src = trim(*dep.source);
    std::string lower = to_lower(src);
    if (lower.rfind("http://", 0) == 0 || lower.find("::http://") != std::string::npos)
        return true;
    bool git_url = lower.rfind("git::", 0) == 0 || lower.rfind("git://", 0) == 0 ||
                   lower.rfind("git@", 0) == 0 ||
                   lower.find(".git") != std::string::npos;
    if (git_url) {
        bool pinned = lower.find("?ref=") != std::string::npos ||
                      lower.find("&ref=") != std::string::npos ||
                      lower.find('#') != std::string::npos;
        if (!pinned) return true;
    }
    std::string host = url_host(lower);
    if (!host.empty() && ctx.lexicons && !ctx.lexicons->host_allowlisted(host)) return true;
    return false;
}

UserInputResult is_user_input(const ConfigNode& node, const PredicateContext& ctx) {
    UserInputResult result;
    if (!ctx.file) return result;
    auto scan = interpolation_spans(node, ctx.file->text, ctx.file->tool);
    result.inputs = std::move(scan.spans);
    result.value = !result.inputs.empty();
    return result;
}

std::optional<SinkKind> is_command_sink(const ConfigNode& node, const PredicateContext& ctx,
                                        Evidence* evidence) {
    if (!ctx.lexicons) return std::nullopt;
    std::string_view text = node.is_leaf() ? std::string_view(node.value) : raw_slice(node, ctx);
    if (node.is_leaf() && ctx.lexicons->matches_code_sink(text)) {
        if (evidence) {
            std::vector<Evidence> lines;
            match_lines(node, ctx,
                        [&](const std::string& line) {
                            return ctx.lexicons->matches_code_sink(line);
                        },
                        lines);
            *evidence = lines.empty() ? Evidence{node.span, std::string(raw_slice(node, ctx))}
                                      : lines.front();
        }
        return SinkKind::Interpreter;
    }
    if (node.key && ctx.lexicons->is_command_sink_key(*node.key, node.value)) {
        if (evidence) *evidence = {node.span, std::string(raw_slice(node, ctx))};
        return SinkKind::OsCommand;
    }
    return std::nullopt;
}

bool interpolation_is_direct(const Interpolation& interp, const ConfigNode& node,
                             const PredicateContext& ctx) {
    // inputs enclosed in shell substitution contexts $(( )) / $( ) are
    // evaluated, not passed as the command itself
    std::string_view slice = raw_slice(node, ctx);
    if (slice.empty()) return true;
    std::size_t base = node.span.begin;
    std::size_t from = 0;
    while (true) {
        std::size_t open = slice.find("$(", from);
        if (open == std::string_view::npos) break;
        int depth = 0;
        std::size_t p = open + 1;
        std::size_t close = std::string_view::npos;
        for (; p < slice.size(); ++p) {
            if (slice[p] == '(') ++depth;
            else if (slice[p] == ')') {
                --depth;
                if (depth == 0) {
                    close = p;
                    break;
                }
            }
        }
        std::size_t region_end = close == std::string_view::npos ? slice.size() : close + 1;
        if (interp.span.begin >= base + open && interp.span.end <= base + region_end)
            return false;
        from = open + 2;
    }
    return true;
}

namespace {

bool has_validation_for(const std::string& variable, const PredicateContext& ctx) {
    if (!ctx.file || variable.empty()) return false;
    std::string needle = last_key_segment(variable);
    if (needle.empty()) needle = variable;
    bool found = false;
    static const std::regex validation_raw(R"(^\s*(validate\w*|assert\w*)\b)",
                                           std::regex::icase);
    walk(ctx.file->root, [&](const ConfigNode& n) {
        if (found) return;
        bool is_validator = false;
        if (n.key) {
            std::string key = to_lower(last_key_segment(*n.key));
            is_validator = key == "assert" || key == "validation" ||
                           key.rfind("validate", 0) == 0;
        }
        if (!is_validator && n.kind == NodeKind::RawSpan) {
            is_validator = std::regex_search(n.value, validation_raw);
        }
        if (!is_validator) return;
        std::string_view body = raw_slice(n, ctx);
        if (body.find(needle) != std::string_view::npos) found = true;
    });
    return found;
}

}  // namespace

bool is_unsanitized_in(const ConfigNode& node, const ConfigNode* /*unit_root*/,
                       const PredicateContext& ctx) {
    auto input = is_user_input(node, ctx);
    if (!input) return false;
    for (const auto& interp : input.inputs) {
        std::string_view span_text = ctx.file->slice(interp.span);
        if (ctx.lexicons && ctx.lexicons->matches_sanitizer(span_text)) continue;
        if (has_validation_for(interp.variable, ctx)) continue;
        return true;  // at least one unguarded input
    }
    return false;
}

bool is_unsanitized(const ConfigNode& node, const PredicateContext& ctx) {
    return is_unsanitized_in(node, nullptr, ctx);
}

PredicateResult is_file_path(const ConfigNode& node, const PredicateContext& ctx) {
    PredicateResult result;
    if (!node.is_leaf()) return result;
    bool keyed = node.key && ctx.lexicons && ctx.lexicons->is_path_key(*node.key);
    bool shaped = is_bare_path(trim(node.value));
    if (keyed || shaped) {
        result.value = true;
        result.evidence.push_back({node.span, std::string(raw_slice(node, ctx))});
    }
    return result;
}

std::optional<AdvisoryRecord> is_outdated_version(const DependencyRef& dep,
                                                  const PredicateContext& ctx,
                                                  std::vector<Diagnostic>* diagnostics) {
    if (!ctx.advisory) return std::nullopt;
    std::optional<std::string> version = dep.version;
    if (version && !parse_version(*version)) {
        if (diagnostics)
            diagnostics->push_back({"unparseable version '" + *version + "' for " + dep.name,
                                    dep.version_span});
        version = std::nullopt;
    }
    auto records = ctx.advisory->query(dep.ecosystem, dep.name, version);
    for (const auto& record : records) {
        if (record.eol) return record;
        if (record.safe_below && version) return record;
    }
    return std::nullopt;
}

std::vector<AdvisoryRecord> has_known_vulnerabilities(const DependencyRef& dep,
                                                      const PredicateContext& ctx) {
    std::vector<AdvisoryRecord> out;
    if (!ctx.advisory) return out;
    std::optional<std::string> version = dep.version;
    if (version && !parse_version(*version)) version = std::nullopt;
    for (const auto& record : ctx.advisory->query(dep.ecosystem, dep.name, version)) {
        bool eol_only = record.eol && !record.any_version && !record.safe_below;
        if (eol_only) continue;
        if (!version && !record.any_version) continue;
        out.push_back(record);
    }
    return out;
}

ConventionResult follows_nonstandard_convention(std::string_view name,
                                                const PredicateContext& ctx) {
    ConventionResult result;
    std::string n = trim(name);
    if (n.empty()) return result;
    // interpolated or free-text names cannot be judged
    if (n.find("{{") != std::string::npos || n.find("${") != std::string::npos ||
        n.find("#{") != std::string::npos || n.find(' ') != std::string::npos)
        return result;

    std::size_t slash = n.find_last_of('/');
    std::string base = slash == std::string::npos ? n : n.substr(slash + 1);
    std::string stem = base;
    std::size_t dot = stem.rfind('.');
    if (dot != std::string::npos && dot > 0 && stem.size() - dot <= 5) stem = stem.substr(0, dot);
    if (stem.empty()) return result;

    if (ctx.lexicons && ctx.lexicons->is_vague_name(stem)) {
        result.value = true;
        result.reason = "vague-word";
        return result;
    }
    if (stem.size() < 3) {
        result.value = true;
        result.reason = "too-short";
        return result;
    }
    bool has_snake = stem.find('_') != std::string::npos;
    bool has_camel = false;
    for (std::size_t i = 1; i < stem.size(); ++i) {
        if (std::islower(static_cast<unsigned char>(stem[i - 1])) &&
            std::isupper(static_cast<unsigned char>(stem[i])))
            has_camel = true;
    }
    if (has_snake && has_camel) {
        result.value = true;
        result.reason = "mixed-style";
    }
    return result;
}

bool is_sensitive_data(std::string_view key_or_name, const PredicateContext& ctx) {
    return ctx.lexicons && ctx.lexicons->matches_sensitive_key(key_or_name);
}

ExposureResult is_exposed(const ConfigNode& node, const PredicateContext& ctx) {
    ExposureResult result;
    if (!ctx.lexicons || !ctx.file) return result;
    const Lexicons& lex = *ctx.lexicons;

    auto add = [&](ExposureKind kind, const Evidence& evidence) {
        if (!result.value) {
            result.value = true;
            result.kind = kind;
        }
        result.evidence.push_back(evidence);
    };

    walk(node, [&](const ConfigNode& n) {
        if (!n.is_leaf() || !n.key) return;
        std::string key = last_key_segment(*n.key);

        // sensitive-keyed scalar holding a literal (non-placeholder) value
        if (lex.matches_sensitive_key(key)) {
            std::string value = trim(n.value);
            if (!value.empty() && !lex.matches_secret_ref(value) &&
                !lex.matches_placeholder(value) && !value_is_pure_interpolation(n, ctx)) {
                add(ExposureKind::LiteralValue, {n.span, std::string(raw_slice(n, ctx))});
            }
            return;
        }

        // sensitive-keyed content written into a plaintext file body; the
        // assignment must carry an actual value (so a dangerous toggle like
        // "PasswordAuthentication yes" stays the configuration rule's case)
        std::string lower_key = to_lower(key);
        if (lower_key == "content" || lower_key == "contents") {
            std::vector<Evidence> lines;
            match_lines(n, ctx,
                        [&](const std::string& line) {
                            if (!lex.matches_sensitive_key(line) ||
                                lex.matches_secret_ref(line))
                                return false;
                            std::size_t sep = line.find_first_of("=:");
                            std::string value = sep == std::string::npos
                                                    ? ""
                                                    : trim(line.substr(sep + 1));
                            if (sep == std::string::npos) {
                                std::size_t space = line.find(' ');
                                if (space != std::string::npos)
                                    value = trim(line.substr(space + 1));
                            }
                            return !value.empty() && !lex.matches_placeholder(value);
                        },
                        lines);
            for (const auto& e : lines) add(ExposureKind::PlaintextFile, e);
            return;
        }
    });

    // sensitive data reaching a debug/log construct without suppression
    walk(node, [&](const ConfigNode& n) {
        if (n.kind != NodeKind::Mapping) return;
        const ConfigNode* log_child = nullptr;
        bool suppressed = false;
        for (const auto& child : n.children) {
            if (!child.key) continue;
            if (lex.is_log_sink_key(*child.key)) log_child = &child;
            if (to_lower(last_key_segment(*child.key)) == "no_log" &&
                (to_lower(trim(child.value)) == "true" || to_lower(trim(child.value)) == "yes"))
                suppressed = true;
        }
        if (!log_child || suppressed) return;
        std::string_view body = raw_slice(*log_child, ctx);
        if (lex.matches_sensitive_key(body)) {
            add(ExposureKind::Logged, {log_child->span, std::string(body)});
        }
    });

    return result;
}

}  // namespace iacsmell
