#pragma once

// Brute-force re-derivation of the ten rule conditions straight from the
// predicate truth table of each evaluation unit. Deliberately independent of
// the engine's composition code so the two can be compared.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "iacsmell/line_records.hpp"
#include "iacsmell/predicates.hpp"
#include "iacsmell/rules.hpp"

namespace iacsmell::testsupport {

inline void gather(const ConfigNode& node, std::vector<const ConfigNode*>& out) {
    out.push_back(&node);
    for (const auto& child : node.children) gather(child, out);
}

inline std::set<std::string> oracle_fired(const PredicateContext& ctx,
                                          const rules::EvalUnit& unit) {
    std::set<std::string> fired;
    const ParsedFile& file = *ctx.file;

    std::vector<const ConfigNode*> nodes;
    for (const ConfigNode* member : unit.members) gather(*member, nodes);

    // dependency rules with od > osv > idm precedence per dependency
    std::vector<DependencyRef> deps;
    for (const ConfigNode* member : unit.members) {
        for (auto& dep : collect_dependencies(*member, ctx)) {
            bool seen = false;
            for (const auto& d : deps) seen = seen || d.span.begin == dep.span.begin;
            if (!seen) deps.push_back(std::move(dep));
        }
    }
    for (const auto& dep : deps) {
        auto outdated = is_outdated_version(dep, ctx);
        bool vulnerable = !has_known_vulnerabilities(dep, ctx).empty();
        if (outdated && vulnerable) fired.insert("outdated-dependencies");
        else if (outdated) fired.insert("outdated-software-version");
        else if (lacks_version_locking(dep) || is_untrusted_source(dep, ctx))
            fired.insert("insecure-dependency-management");
    }

    bool config_file = false;
    bool sensitive_setting = false;
    for (const ConfigNode* member : unit.members) {
        config_file = config_file || is_config_file(*member, ctx).value;
        sensitive_setting = sensitive_setting || is_sensitive_setting(*member, ctx).value;
    }
    if (config_file && sensitive_setting) fired.insert("insecure-configuration-management");

    bool cmd = false, code = false, traversal = false, reaches = false;
    for (const ConfigNode* n : nodes) {
        auto sink = is_command_sink(*n, ctx);
        auto input = is_user_input(*n, ctx);
        bool unsan = input.value && is_unsanitized(*n, ctx);
        if (sink && *sink == SinkKind::Interpreter && unsan) code = true;
        if (sink && *sink == SinkKind::OsCommand && unsan) {
            for (const auto& interp : input.inputs) {
                if (interpolation_is_direct(interp, *n, ctx)) cmd = true;
            }
        }
        if (is_file_path(*n, ctx).value && unsan) traversal = true;
        bool path_keyed = n->key && ctx.lexicons->is_path_key(*n->key);
        if ((sink.has_value() || path_keyed) && unsan) reaches = true;
    }
    if (code) fired.insert("code-injection");
    if (cmd) fired.insert("command-injection");
    if (traversal) fired.insert("path-traversal");
    if (reaches && !cmd && !code && !traversal) fired.insert("insecure-input-handling");

    for (const ConfigNode* n : nodes) {
        if (!n->is_leaf() || !n->key || n->value.empty()) continue;
        std::string key = to_lower(*n->key);
        bool named = ctx.lexicons->is_path_key(key) || key == "register";
        if (file.parse_mode == ParseMode::Lexical)
            named = named || key == "file" || key == "template" || key == "directory" ||
                    key == "define";
        if (named && follows_nonstandard_convention(trim(n->value), ctx).value)
            fired.insert("inadequate-naming-convention");
    }
    if (unit.node && unit.node->key && file.parse_mode == ParseMode::Structured &&
        file.tool != ToolKind::Ansible) {
        std::string key = *unit.node->key;
        std::size_t slash = key.find_last_of('/');
        bool check_label = file.tool != ToolKind::Terraform || slash != std::string::npos;
        std::string label = slash == std::string::npos ? key : key.substr(slash + 1);
        if (check_label && follows_nonstandard_convention(label, ctx).value)
            fired.insert("inadequate-naming-convention");
    }

    for (const ConfigNode* member : unit.members) {
        if (is_exposed(*member, ctx).value) fired.insert("sensitive-information-exposure");
    }
    return fired;
}

// random single-task playbooks mixing sinks, interpolations, sensitive keys
// and dependency declarations
class SnippetGenerator {
  public:
    explicit SnippetGenerator(unsigned seed) : rng_(seed) {}

    std::string next() {
        static const std::vector<std::string> bodies = {
            // configuration edits
            "      lineinfile:\n        path: /etc/ssh/sshd_config\n"
            "        line: 'PermitRootLogin yes'\n",
            "      lineinfile:\n        path: /etc/ssh/sshd_config\n"
            "        line: 'PermitRootLogin no'\n",
            "      lineinfile:\n        path: /home/app/notes.txt\n"
            "        line: 'PermitRootLogin yes'\n",
            // dependencies
            "      apt:\n        name: \"apache2\"\n        state: present\n",
            "      apt:\n        name: \"openssl\"\n        version: \"1.0.1\"\n",
            "      apt:\n        name: \"openssl\"\n        version: \"3.0.13\"\n",
            "      apt:\n        name: \"python2.7\"\n        state: present\n",
            "      apt:\n        name: \"nginx\"\n        state: latest\n",
            "      apt:\n        name: \"nginx\"\n        version: \"1.24.0\"\n",
            // command/code sinks
            "      command: \"apt-get {{ action }}\"\n",
            "      command: \"apt-get {{ action | quote }}\"\n",
            "      command: \"apt-get update\"\n",
            "      shell: \"echo $(( {{ user_number }} + 1 ))\"\n",
            "      shell: \"echo {{ message }}\"\n",
            "      set_fact:\n        result: \"{{ lookup('pipe', 'python3 -c x') }}\"\n",
            "      set_fact:\n        result: \"{{ user_expression | length }}\"\n",
            // paths
            "      copy:\n        src: \"{{ file_path }}\"\n        dest: /etc/securefile\n",
            "      copy:\n        src: files/app.conf\n        dest: /etc/securefile\n",
            "      file:\n        path: /etc/doitnow.txt\n        state: touch\n",
            "      file:\n        path: /etc/maintenance_notes.txt\n        state: touch\n",
            // secrets
            "      copy:\n        content: |\n"
            "          aws_secret_access_key = {{ aws_secret_access_key }}\n"
            "        dest: /etc/aws/credentials\n",
            "      copy:\n        content: \"{{ vault_aws_credentials }}\"\n"
            "        dest: /etc/aws/credentials\n",
            "      debug:\n        msg: \"pass {{ db_password }}\"\n",
            "      debug:\n        msg: \"pass {{ db_password }}\"\n      no_log: true\n",
            "      vars:\n        db_password: hunter2\n      debug:\n        msg: done\n",
        };
        std::uniform_int_distribution<std::size_t> pick(0, bodies.size() - 1);
        std::string body = bodies[pick(rng_)];
        // occasionally stack a second fragment into the same task
        std::uniform_int_distribution<int> coin(0, 3);
        std::string extra;
        if (coin(rng_) == 0) {
            static const std::vector<std::string> extras = {
                "      register: data\n",
                "      register: install_result\n",
                "      become: false\n",
            };
            std::uniform_int_distribution<std::size_t> pick_extra(0, extras.size() - 1);
            extra = extras[pick_extra(rng_)];
        }
        return "- name: generated play\n  hosts: all\n  tasks:\n    - name: generated task\n" +
               body + extra;
    }

  private:
    std::mt19937 rng_;
};

}  // namespace iacsmell::testsupport
