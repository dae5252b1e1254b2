#include "iacsmell/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "iacsmell/advisory.hpp"
#include "iacsmell/builtin_data.hpp"
#include "iacsmell/evalharness.hpp"
#include "iacsmell/frontends.hpp"
#include "iacsmell/line_records.hpp"
#include "iacsmell/report.hpp"

namespace fs = std::filesystem;

namespace iacsmell::cli {

namespace {

struct LoadedContext {
    Taxonomy taxonomy;
    Lexicons lexicons;
    AdvisoryDb advisory;
};

LoadedContext load_context(const RunConfig& config, std::ostream& err) {
    LoadedContext ctx;
    std::vector<Diagnostic> warnings;
    ctx.taxonomy = config.taxonomy_file ? Taxonomy::load_file(*config.taxonomy_file,
                                                              /*strict=*/false, &warnings)
                                        : Taxonomy::load_default();
    for (const auto& w : warnings) err << "warning: " << w.message << "\n";
    rules::validate_against(ctx.taxonomy);
    ctx.lexicons = config.lexicon_file ? Lexicons::load_file(*config.lexicon_file)
                                       : Lexicons::defaults();
    ctx.advisory = config.advisory_file ? AdvisoryDb::load_file(*config.advisory_file)
                                        : AdvisoryDb::load_default();
    return ctx;
}

bool candidate_file(const fs::path& path) {
    static const std::vector<std::string> exts = {".yml",  ".yaml", ".tf", ".sls", ".pp",
                                                  ".rb",   ".ts",   ".js", ".hcl"};
    std::string name = to_lower(path.filename().string());
    if (name == "vagrantfile") return true;
    std::string ext = to_lower(path.extension().string());
    for (const auto& e : exts) {
        if (ext == e) return true;
    }
    return false;
}

// inputs are files, directories (walked recursively) or simple '*' globs
std::vector<std::string> resolve_inputs(const std::vector<std::string>& inputs,
                                        std::ostream& err) {
    std::vector<std::string> files;
    for (const auto& input : inputs) {
        std::error_code ec;
        if (fs::is_directory(input, ec)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::recursive_directory_iterator(
                     input, fs::directory_options::skip_permission_denied, ec)) {
                if (entry.is_regular_file(ec) && candidate_file(entry.path()))
                    found.push_back(entry.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(input, ec)) {
            files.push_back(input);
        } else if (input.find('*') != std::string::npos) {
            fs::path pattern(input);
            fs::path dir = pattern.parent_path().empty() ? "." : pattern.parent_path();
            std::string mask = pattern.filename().string();
            std::size_t star = mask.find('*');
            std::string prefix = mask.substr(0, star);
            std::string suffix = mask.substr(star + 1);
            std::vector<std::string> found;
            if (fs::is_directory(dir, ec)) {
                for (const auto& entry : fs::directory_iterator(dir, ec)) {
                    std::string name = entry.path().filename().string();
                    if (name.size() >= prefix.size() + suffix.size() &&
                        name.rfind(prefix, 0) == 0 &&
                        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0 &&
                        entry.is_regular_file(ec)) {
                        found.push_back(entry.path().string());
                    }
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            err << "error: no such file or directory: " << input << "\n";
        }
    }
    // a file reachable through several inputs is linted once
    std::vector<std::string> unique;
    std::set<std::string> seen;
    for (auto& f : files) {
        if (seen.insert(f).second) unique.push_back(std::move(f));
    }
    return unique;
}

bool color_enabled(const RunConfig& config) {
    if (std::getenv("IACSMELL_NO_COLOR") != nullptr) return false;
    return config.color;
}

int severity_rank(rules::Severity severity) {
    switch (severity) {
        case rules::Severity::High: return 2;
        case rules::Severity::Medium: return 1;
        case rules::Severity::Low: return 0;
    }
    return 0;
}

}  // namespace

int cmd_lint(const RunConfig& config, std::ostream& out, std::ostream& err) {
    LoadedContext loaded;
    try {
        loaded = load_context(config, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    std::vector<std::string> files = resolve_inputs(config.inputs, err);
    if (files.empty()) {
        err << "error: no input files matched\n";
        return kExitError;
    }

    struct FileResult {
        std::vector<rules::Finding> findings;
        std::vector<std::string> diagnostics;
        bool processed = false;
    };
    std::vector<FileResult> results(files.size());

    unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                    : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(files.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= files.size()) break;
            FileResult& result = results[i];
            std::string content;
            try {
                content = read_text_file(files[i]);
            } catch (const std::exception& e) {
                result.diagnostics.push_back(e.what());
                continue;
            }
            ToolKind tool;
            if (config.tool_override) {
                tool = *config.tool_override;
            } else {
                std::string detect_error;
                auto detected = detect_tool(files[i], content, &detect_error);
                if (!detected) {
                    result.diagnostics.push_back(detect_error);
                    continue;
                }
                tool = *detected;
            }
            ParsedFile parsed = parse(content, tool, files[i]);
            PredicateContext pctx{&parsed, &loaded.advisory, &loaded.lexicons};
            const std::set<std::string>* enabled =
                config.enabled_rules.empty() ? nullptr : &config.enabled_rules;
            result.findings = rules::evaluate(parsed, pctx, enabled);
            result.processed = true;
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // deterministic merge: file order is the sorted input list, findings are
    // already ordered within each file
    std::vector<rules::Finding> findings;
    std::size_t processed = 0;
    for (auto& result : results) {
        for (const auto& d : result.diagnostics) err << "warning: " << d << "\n";
        if (result.processed) ++processed;
        findings.insert(findings.end(), std::make_move_iterator(result.findings.begin()),
                        std::make_move_iterator(result.findings.end()));
    }
    if (processed == 0) {
        err << "error: no input file could be processed\n";
        return kExitError;
    }
    std::sort(findings.begin(), findings.end(),
              [](const rules::Finding& a, const rules::Finding& b) {
                  if (a.path != b.path) return a.path < b.path;
                  if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
                  return a.rule_id < b.rule_id;
              });

    if (config.format == OutputFormat::Json) {
        out << report::findings_json(findings, files.size()).dump(2) << "\n";
    } else {
        report::write_text(findings, out, color_enabled(config));
    }

    int threshold = severity_rank(config.fail_on);
    for (const auto& f : findings) {
        if (severity_rank(f.severity) >= threshold) return kExitFindings;
    }
    return kExitClean;
}

int cmd_evaluate(const RunConfig& config, const std::string& manifest_path, std::ostream& out,
                 std::ostream& err) {
    LoadedContext loaded;
    try {
        loaded = load_context(config, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    try {
        auto corpus = evalharness::load_manifest(manifest_path);
        std::string base_dir = fs::path(manifest_path).parent_path().string();
        auto report = evalharness::evaluate_corpus(corpus, base_dir, loaded.advisory,
                                                   loaded.lexicons);
        if (config.format == OutputFormat::Json) {
            out << evalharness::to_json(report).dump(2) << "\n";
        } else {
            out << evalharness::render_text(report);
        }
        for (const auto& [key, stats] : report.cells) {
            auto precision = stats.precision();
            if (precision && *precision < config.threshold) return kExitFindings;
        }
        return kExitClean;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

std::optional<evolution::SnapshotSeries> read_snapshot_fixture(const std::string& dir,
                                                               std::string* error) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        if (error) *error = "not a directory: " + dir;
        return std::nullopt;
    }
    struct Entry {
        int order;
        std::string commit;
        long long epoch;
        fs::path path;
    };
    std::vector<Entry> entries;
    for (const auto& item : fs::directory_iterator(dir, ec)) {
        if (!item.is_regular_file(ec) || item.path().extension() != ".snap") continue;
        std::string stem = item.path().stem().string();
        // NNN_<commitid>_<epoch>
        auto parts = split(stem, '_');
        if (parts.size() < 3) continue;
        Entry entry;
        try {
            entry.order = std::stoi(parts[0]);
            entry.epoch = std::stoll(parts[parts.size() - 1]);
        } catch (const std::exception&) {
            continue;
        }
        entry.commit = parts[1];
        for (std::size_t i = 2; i + 1 < parts.size(); ++i) entry.commit += "_" + parts[i];
        entry.path = item.path();
        entries.push_back(std::move(entry));
    }
    if (entries.empty()) {
        if (error) *error = "no *.snap files in " + dir;
        return std::nullopt;
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.order < b.order; });

    evolution::SnapshotSeries series;
    series.repo_id = dir;
    series.path = fs::path(dir).filename().string() + ".yml";
    for (const auto& entry : entries) {
        evolution::Snapshot snap;
        snap.commit_id = entry.commit;
        snap.timestamp = entry.epoch;
        try {
            snap.content = read_text_file(entry.path.string());
        } catch (const std::exception&) {
            snap.parse_failed = true;
        }
        series.snapshots.push_back(std::move(snap));
    }
    return series;
}

namespace {

std::string run_command(const std::string& command, int* exit_code) {
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        if (exit_code) *exit_code = -1;
        return output;
    }
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) output.append(buffer, n);
    int status = pclose(pipe);
    if (exit_code) *exit_code = status;
    return output;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out.push_back(c);
    }
    out += "'";
    return out;
}

}  // namespace

std::vector<evolution::SnapshotSeries> read_git_history(const std::string& repo,
                                                        const std::vector<std::string>& globs,
                                                        std::string* error) {
    std::vector<evolution::SnapshotSeries> out;
    std::error_code ec;
    if (!fs::is_directory(fs::path(repo) / ".git", ec)) {
        if (error) *error = "no version-control metadata under " + repo;
        return out;
    }
    std::string pathspec;
    for (const auto& glob : globs) pathspec += " " + shell_quote(glob);
    int code = 0;
    std::string listing = run_command(
        "git -C " + shell_quote(repo) + " log --reverse --format=%H:%ct --name-only --" +
            pathspec + " 2>/dev/null",
        &code);
    if (code != 0) {
        if (error) *error = "git log failed under " + repo;
        return out;
    }

    // commits touching each path, oldest first
    std::map<std::string, std::vector<std::pair<std::string, long long>>> touched;
    std::string current_commit;
    long long current_time = 0;
    std::istringstream lines(listing);
    std::string line;
    while (std::getline(lines, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::size_t colon = line.find(':');
        if (line.size() > 40 && colon == 40) {
            current_commit = line.substr(0, colon);
            current_time = std::stoll(line.substr(colon + 1));
        } else if (!current_commit.empty()) {
            touched[line].push_back({current_commit, current_time});
        }
    }
    for (const auto& [path, commits] : touched) {
        evolution::SnapshotSeries series;
        series.repo_id = repo;
        series.path = path;
        for (const auto& [commit, time] : commits) {
            evolution::Snapshot snap;
            snap.commit_id = commit;
            snap.timestamp = time;
            int show_code = 0;
            snap.content = run_command("git -C " + shell_quote(repo) + " show " +
                                           shell_quote(commit + ":" + path) + " 2>/dev/null",
                                       &show_code);
            snap.parse_failed = show_code != 0;
            series.snapshots.push_back(std::move(snap));
        }
        out.push_back(std::move(series));
    }
    return out;
}

int cmd_history(const RunConfig& config, const std::string& repo_path,
                const std::vector<std::string>& file_globs, std::ostream& out,
                std::ostream& err) {
    LoadedContext loaded;
    try {
        loaded = load_context(config, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    std::vector<evolution::SnapshotSeries> series_list;
    std::string fixture_error;
    if (auto fixture = read_snapshot_fixture(repo_path, &fixture_error)) {
        series_list.push_back(std::move(*fixture));
    } else {
        std::string git_error;
        series_list = read_git_history(repo_path, file_globs, &git_error);
        if (series_list.empty()) {
            err << "error: " << fixture_error << "; " << git_error << "\n";
            return kExitError;
        }
    }

    evolution::TrackContext tctx{&loaded.advisory, &loaded.lexicons, config.tool_override};
    std::vector<evolution::PersistenceRecord> all_records;
    for (const auto& series : series_list) {
        std::vector<Diagnostic> diags;
        auto records = evolution::track(series, tctx, &diags);
        for (const auto& d : diags) err << "warning: " << d.message << "\n";
        all_records.insert(all_records.end(), records.begin(), records.end());
    }

    for (const auto& record : all_records) {
        nlohmann::ordered_json j;
        j["fingerprint"] = record.fingerprint;
        j["rule_id"] = record.rule_id;
        j["first_seen"] = record.first_seen;
        j["last_seen"] = record.last_seen;
        if (record.fixed_at) j["fixed_at"] = *record.fixed_at;
        j["first_index"] = record.first_index;
        j["last_index"] = record.last_index;
        j["lifespan_commits"] = record.lifespan_commits;
        j["lifespan_seconds"] = record.lifespan_seconds;
        j["status"] = evolution::to_string(record.status);
        out << j.dump() << "\n";
    }

    auto histogram = evolution::commits_to_fix(all_records);
    nlohmann::ordered_json h;
    h["histogram"] = nlohmann::ordered_json::object();
    for (const auto& [rule, lifespans] : histogram) {
        h["histogram"][rule] = {{"fixed", lifespans.fixed},
                                {"persistent", lifespans.persistent}};
    }
    out << h.dump() << "\n";
    return kExitClean;
}

int cmd_taxonomy(const RunConfig& config, const std::optional<std::string>& rule_id,
                 std::ostream& out, std::ostream& err) {
    LoadedContext loaded;
    try {
        loaded = load_context(config, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    if (rule_id) {
        try {
            out << rules::explain(*rule_id);
            return kExitClean;
        } catch (const rules::UnknownRuleError& e) {
            err << "error: " << e.what() << "\n";
            return kExitError;
        }
    }
    for (const auto& category : loaded.taxonomy.categories()) {
        out << category.id << "  [";
        for (std::size_t i = 0; i < category.cwes.size(); ++i) {
            if (i) out << ',';
            out << category.cwes[i];
        }
        out << "]" << (category.rule_bound ? "  rule-bound" : "")
            << (category.provisional ? "  provisional" : "") << "\n";
    }
    out << loaded.taxonomy.categories().size() << " categories, "
        << loaded.taxonomy.rule_bound_ids().size() << " rule-bound\n";
    return kExitClean;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"deterministic security-smell analyzer for IaC scripts"};
    app.require_subcommand(1);

    RunConfig config;
    std::string tool_name;
    std::string format_name = "text";
    std::string fail_on_name = "low";
    std::vector<std::string> rule_filter;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tool", tool_name, "force the IaC tool instead of detecting it");
        cmd->add_option("--lexicons", config.lexicon_file, "lexicon overrides file");
        cmd->add_option("--advisories", config.advisory_file, "advisory database file");
        cmd->add_option("--taxonomy", config.taxonomy_file, "taxonomy data file");
        cmd->add_option("--format", format_name, "output format: text|json");
        cmd->add_option("--jobs", config.jobs, "worker threads (default: hardware)");
    };

    CLI::App* lint = app.add_subcommand("lint", "scan files for security smells");
    lint->add_option("inputs", config.inputs, "files, directories or globs")->required();
    lint->add_option("--rules", rule_filter, "comma-separated rule ids to enable")
        ->delimiter(',');
    lint->add_option("--fail-on", fail_on_name, "lowest severity that fails the run");
    add_common(lint);

    CLI::App* evaluate = app.add_subcommand("evaluate", "score detections against an oracle corpus");
    std::string manifest;
    evaluate->add_option("manifest", manifest, "corpus manifest (JSON lines)")->required();
    evaluate->add_option("--threshold", config.threshold,
                         "minimum acceptable precision (default 0.9)");
    add_common(evaluate);

    CLI::App* history = app.add_subcommand("history", "mine smell lifespans from a history");
    std::string repo;
    std::vector<std::string> globs;
    history->add_option("repo", repo, "git repository or snapshot fixture directory")
        ->required();
    history->add_option("globs", globs, "file patterns to follow (git mode)");
    add_common(history);

    CLI::App* taxonomy = app.add_subcommand("taxonomy", "list categories or show a rule card");
    std::optional<std::string> rule_id;
    taxonomy->add_option("--rule", rule_id, "print the rule card for one rule id");
    add_common(taxonomy);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream sink;
        int code = app.exit(e, out, err);
        return code == 0 ? kExitClean : kExitError;
    }

    if (!tool_name.empty()) {
        config.tool_override = tool_from_string(tool_name);
        if (!config.tool_override) {
            err << "error: unknown tool '" << tool_name << "'\n";
            return kExitError;
        }
    }
    std::string format_lower = to_lower(format_name);
    if (format_lower == "json") config.format = OutputFormat::Json;
    else if (format_lower == "text") config.format = OutputFormat::Text;
    else {
        err << "error: unknown format '" << format_name << "'\n";
        return kExitError;
    }
    if (auto severity = rules::severity_from_string(fail_on_name)) {
        config.fail_on = *severity;
    } else {
        err << "error: unknown severity '" << fail_on_name << "'\n";
        return kExitError;
    }
    for (const auto& id : rule_filter) {
        if (!rules::find_rule(id)) {
            err << "error: unknown rule id '" << id << "'\n";
            return kExitError;
        }
        config.enabled_rules.insert(id);
    }

    if (lint->parsed()) return cmd_lint(config, out, err);
    if (evaluate->parsed()) return cmd_evaluate(config, manifest, out, err);
    if (history->parsed()) return cmd_history(config, repo, globs, out, err);
    if (taxonomy->parsed()) return cmd_taxonomy(config, rule_id, out, err);
    return kExitError;
}

}  // namespace iacsmell::cli
