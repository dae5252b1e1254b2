#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/advisory.hpp"
#include "iacsmell/config_node.hpp"
#include "iacsmell/frontends.hpp"
#include "iacsmell/lexicons.hpp"

namespace iacsmell {

struct PredicateContext {
    const ParsedFile* file = nullptr;
    const AdvisoryDb* advisory = nullptr;
    const Lexicons* lexicons = nullptr;
};

struct Evidence {
    SourceSpan span;
    std::string text;
};

struct PredicateResult {
    bool value = false;
    std::vector<Evidence> evidence;
    explicit operator bool() const { return value; }
};

struct DependencyRef {
    std::string name;
    std::optional<std::string> version;
    std::optional<std::string> source;
    std::string ecosystem;        // apt, yum, pip, gem, terraform, box, generic, npm
    bool floating = false;        // declared as latest/*/unbounded range
    SourceSpan span;              // name evidence
    SourceSpan version_span;      // == span when no explicit version
};

// Table-1 atomic predicates. All are pure functions of (node, ctx); a true
// result carries at least one evidence span whose text matches the trigger.

// Node manipulates a recognized configuration target (path under /etc, *.conf,
// sshd_config, sudoers*, or a lineinfile/blockinfile/file.managed/template
// construct).
PredicateResult is_config_file(const ConfigNode& node, const PredicateContext& ctx);

// A scalar within node matches the dangerous-settings lexicon.
PredicateResult is_sensitive_setting(const ConfigNode& node, const PredicateContext& ctx);

// Package/module declaration recognition; absent for non-dependency nodes.
std::optional<DependencyRef> is_dependency(const ConfigNode& node, const PredicateContext& ctx);
// All dependency declarations within a subtree (a task can declare only one,
// lexical groups may hold several).
std::vector<DependencyRef> collect_dependencies(const ConfigNode& node,
                                                const PredicateContext& ctx);

bool lacks_version_locking(const DependencyRef& dep);
bool is_untrusted_source(const DependencyRef& dep, const PredicateContext& ctx);

struct UserInputResult {
    bool value = false;
    std::vector<Interpolation> inputs;
    explicit operator bool() const { return value; }
};
// True iff the node's raw text interpolates a variable or references an
// environment/config lookup.
UserInputResult is_user_input(const ConfigNode& node, const PredicateContext& ctx);

enum class SinkKind { OsCommand, Interpreter };
// os-command iff the node key is a command sink; interpreter iff its value
// matches the code-sink patterns. Interpreter classification wins.
std::optional<SinkKind> is_command_sink(const ConfigNode& node, const PredicateContext& ctx,
                                        Evidence* evidence = nullptr);

// True iff the node takes user input and at least one interpolated variable
// has neither a sanitizer filter nor a sibling validation construct naming it.
bool is_unsanitized(const ConfigNode& node, const PredicateContext& ctx);
// Same check with an explicit sibling scope (the enclosing evaluation unit).
bool is_unsanitized_in(const ConfigNode& node, const ConfigNode* unit_root,
                       const PredicateContext& ctx);

PredicateResult is_file_path(const ConfigNode& node, const PredicateContext& ctx);

// Advisory-backed version checks. Unparseable versions yield absent plus a
// diagnostic rather than an error.
std::optional<AdvisoryRecord> is_outdated_version(const DependencyRef& dep,
                                                  const PredicateContext& ctx,
                                                  std::vector<Diagnostic>* diagnostics = nullptr);
std::vector<AdvisoryRecord> has_known_vulnerabilities(const DependencyRef& dep,
                                                      const PredicateContext& ctx);

struct ConventionResult {
    bool value = false;
    std::string reason;  // vague-word | too-short | mixed-style
    explicit operator bool() const { return value; }
};
ConventionResult follows_nonstandard_convention(std::string_view name,
                                                const PredicateContext& ctx);

bool is_sensitive_data(std::string_view key_or_name, const PredicateContext& ctx);

enum class ExposureKind { LiteralValue, PlaintextFile, Logged };
const char* to_string(ExposureKind kind);

struct ExposureResult {
    bool value = false;
    std::optional<ExposureKind> kind;
    std::vector<Evidence> evidence;
    explicit operator bool() const { return value; }
};
// Sensitive data held as a literal value, written into a plaintext file body,
// or logged without suppression. Vault/sops references and secret-store
// lookups do not count as exposed.
ExposureResult is_exposed(const ConfigNode& node, const PredicateContext& ctx);

// helpers shared with the rules module
std::string_view node_raw_text(const ConfigNode& node, const PredicateContext& ctx);
bool interpolation_is_direct(const Interpolation& interp, const ConfigNode& node,
                             const PredicateContext& ctx);

}  // namespace iacsmell
