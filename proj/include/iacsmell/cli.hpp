#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iacsmell/evolution.hpp"
#include "iacsmell/rules.hpp"

namespace iacsmell::cli {

enum class OutputFormat { Text, Json };

struct RunConfig {
    std::vector<std::string> inputs;
    std::optional<ToolKind> tool_override;
    std::set<std::string> enabled_rules;  // empty = all ten
    std::optional<std::string> lexicon_file;
    std::optional<std::string> advisory_file;
    std::optional<std::string> taxonomy_file;
    OutputFormat format = OutputFormat::Text;
    rules::Severity fail_on = rules::Severity::Low;
    int jobs = 0;  // 0 = hardware concurrency
    double threshold = 0.9;
    bool color = true;
};

// Exit codes: 0 clean, 1 findings at/above fail-on (lint) or threshold miss
// (evaluate), 2 operational error.
constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

int cmd_lint(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& config, const std::string& manifest_path, std::ostream& out,
                 std::ostream& err);
int cmd_history(const RunConfig& config, const std::string& repo_path,
                const std::vector<std::string>& file_globs, std::ostream& out,
                std::ostream& err);
int cmd_taxonomy(const RunConfig& config, const std::optional<std::string>& rule_id,
                 std::ostream& out, std::ostream& err);

// Snapshot acquisition adapters. Fixture directories hold
// NNN_<commitid>_<epoch>.snap files; git repositories are read through the
// system git client (commits touching the path, oldest first).
std::optional<evolution::SnapshotSeries> read_snapshot_fixture(const std::string& dir,
                                                               std::string* error);
std::vector<evolution::SnapshotSeries> read_git_history(const std::string& repo,
                                                        const std::vector<std::string>& globs,
                                                        std::string* error);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iacsmell::cli
