// Acceptance suite: exercises the analyzer end to end through the CLI binary
// and the library, printing one PASS/FAIL line per criterion.
//
// usage: acceptance_tests <path-to-iacsmell-binary> <source-root>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../support/oracle.hpp"
#include "iacsmell/evolution.hpp"
#include "iacsmell/line_records.hpp"
#include "iacsmell/taxonomy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace iacsmell;

namespace {

std::string g_binary;
std::string g_root;
int g_failures = 0;

struct CliResult {
    int exit_code = 0;
    std::string output;
    double seconds = 0.0;
};

CliResult run_cli(const std::string& args) {
    CliResult result;
    std::string command = g_binary + " " + args + " 2>/dev/null";
    auto start = std::chrono::steady_clock::now();
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        result.exit_code = -1;
        return result;
    }
    char buffer[8192];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.output.append(buffer, n);
    int status = pclose(pipe);
    auto end = std::chrono::steady_clock::now();
    result.seconds = std::chrono::duration<double>(end - start).count();
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

void report(int criterion, const std::string& label, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion-" << criterion << ": " << label;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

const std::vector<std::string>& top_ten_order() {
    static const std::vector<std::string> order = {
        "insecure-configuration-management", "insecure-dependency-management",
        "insecure-input-handling",           "outdated-dependencies",
        "path-traversal",                    "command-injection",
        "code-injection",                    "outdated-software-version",
        "inadequate-naming-convention",      "sensitive-information-exposure",
    };
    return order;
}

// --- criterion 1: golden Top-10 detection ----------------------------------

void criterion_1() {
    std::string fixture = g_root + "/tests/fixtures/annotated_top10_playbook.yml";
    CliResult run = run_cli("lint " + fixture + " --format json");
    bool ok = run.exit_code == 1;
    std::string detail;

    json findings;
    if (ok) {
        findings = json::parse(run.output, nullptr, false);
        ok = !findings.is_discarded() && findings["findings"].size() == 10;
        if (!ok) detail = "expected exactly 10 findings";
    } else {
        detail = "exit code " + std::to_string(run.exit_code);
    }

    if (ok) {
        std::set<std::string> ids;
        for (const auto& f : findings["findings"]) ids.insert(f["rule_id"].get<std::string>());
        std::set<std::string> expected(top_ten_order().begin(), top_ten_order().end());
        ok = ids == expected;
        if (!ok) detail = "rule-id set mismatch";
    }

    if (ok) {
        // map each annotated task (#N comment) to its line extent
        std::vector<std::string> lines = split_lines(read_text_file(fixture));
        std::vector<int> task_starts;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (lines[i].rfind("    - name:", 0) == 0)
                task_starts.push_back(static_cast<int>(i) + 1);
        }
        for (int n = 1; n <= 10 && ok; ++n) {
            std::string marker = "#" + std::to_string(n) + " - ";
            int comment_line = -1;
            for (std::size_t i = 0; i < lines.size(); ++i) {
                if (lines[i].find(marker) != std::string::npos)
                    comment_line = static_cast<int>(i) + 1;
            }
            if (comment_line < 0) {
                ok = false;
                detail = "missing annotation " + marker;
                break;
            }
            int task_begin = 1;
            int task_end = static_cast<int>(lines.size());
            for (std::size_t t = 0; t < task_starts.size(); ++t) {
                if (task_starts[t] <= comment_line) {
                    task_begin = task_starts[t];
                    task_end = t + 1 < task_starts.size() ? task_starts[t + 1] - 1
                                                          : static_cast<int>(lines.size());
                }
            }
            const std::string& rule = top_ten_order()[static_cast<std::size_t>(n - 1)];
            bool located = false;
            for (const auto& f : findings["findings"]) {
                if (f["rule_id"] != rule) continue;
                int line = f["line"].get<int>();
                located = line >= task_begin - 2 && line <= task_end + 2;
            }
            if (!located) {
                ok = false;
                detail = rule + " not on its annotated task";
            }
        }
    }

    if (ok && run.seconds >= 1.0) {
        ok = false;
        detail = "runtime " + std::to_string(run.seconds) + "s";
    }
    report(1, "golden Top-10 detection on the annotated playbook", ok, detail);
}

// --- criterion 2: over-privileged guest playbook ----------------------------

void criterion_2() {
    std::string fixture = g_root + "/tests/fixtures/guest_user_privileges.yml";
    CliResult run = run_cli("lint " + fixture + " --format json");
    json findings = json::parse(run.output, nullptr, false);
    bool ok = !findings.is_discarded();
    std::string detail;

    int nopasswd_line = -1;
    std::vector<std::string> lines = split_lines(read_text_file(fixture));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find("NOPASSWD:ALL") != std::string::npos)
            nopasswd_line = static_cast<int>(i) + 1;
    }

    if (ok) {
        ok = false;
        for (const auto& f : findings["findings"]) {
            if (f["rule_id"] == "insecure-configuration-management" &&
                f["line"].get<int>() == nopasswd_line)
                ok = true;
        }
        if (!ok) detail = "no icm finding anchored on the NOPASSWD:ALL line";
    }
    report(2, "passwordless-sudo playbook flags insecure configuration", ok, detail);
}

// --- criterion 3: out-of-scope negative -------------------------------------

void criterion_3() {
    std::string fixture = g_root + "/tests/fixtures/no_log_only.yml";
    CliResult run = run_cli("lint " + fixture + " --format json");
    json findings = json::parse(run.output, nullptr, false);
    bool ok = run.exit_code == 0 && !findings.is_discarded() && findings["findings"].empty();
    report(3, "no_log-only file stays outside the rule set", ok,
           ok ? "" : "expected zero findings and exit 0");
}

// --- criterion 4: precision on the bundled corpus ---------------------------

void criterion_4() {
    CliResult run = run_cli("evaluate " + g_root + "/corpus/manifest.jsonl --format json");
    json report_json = json::parse(run.output, nullptr, false);
    bool ok = run.exit_code == 0 && !report_json.is_discarded();
    std::string detail = ok ? "" : "evaluate failed";

    std::map<std::string, std::pair<int, int>> tp_fp;  // tool -> (tp, fp)
    int total_tp = 0, total_fn = 0;
    if (ok) {
        for (const auto& cell : report_json["cells"]) {
            std::string tool = cell["tool"].get<std::string>();
            tp_fp[tool].first += cell["tp"].get<int>();
            tp_fp[tool].second += cell["fp"].get<int>();
            total_tp += cell["tp"].get<int>();
            total_fn += cell["fn"].get<int>();
        }
        for (const char* tool : {"ansible", "puppet", "saltstack"}) {
            auto [tp, fp] = tp_fp[tool];
            if (tp == 0 || fp != 0) {  // precision must be exactly 1.00
                ok = false;
                detail = std::string(tool) + " precision below 1.00";
            }
        }
    }
    if (ok) {
        double recall = total_tp + total_fn == 0
                            ? 0.0
                            : static_cast<double>(total_tp) / (total_tp + total_fn);
        if (recall < 0.9) {
            ok = false;
            detail = "corpus recall " + std::to_string(recall);
        }
    }
    if (ok && run.seconds >= 5.0) {
        ok = false;
        detail = "runtime " + std::to_string(run.seconds) + "s";
    }
    report(4, "bundled corpus precision 1.00 (ansible/puppet/saltstack), recall >= 0.9", ok,
           detail);
}

// --- criterion 5: oracle equivalence on generated snippets ------------------

void criterion_5() {
    AdvisoryDb advisory = AdvisoryDb::load_default();
    const Lexicons& lexicons = Lexicons::defaults();
    testsupport::SnippetGenerator generator(20260810);

    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        std::string snippet = generator.next();
        ParsedFile file = parse(snippet, ToolKind::Ansible, "generated.yml");
        PredicateContext ctx{&file, &advisory, &lexicons};
        auto findings = rules::evaluate(file, ctx);
        for (const auto& unit : rules::evaluation_units(file)) {
            std::set<std::string> engine;
            for (const auto& f : findings) {
                if (f.span.begin >= unit.span.begin && f.span.begin <= unit.span.end)
                    engine.insert(f.rule_id);
            }
            if (engine != testsupport::oracle_fired(ctx, unit)) ++mismatches;
        }
    }
    report(5, "rule engine equals the predicate-truth-table oracle on 200 snippets",
           mismatches == 0, mismatches == 0 ? "" : std::to_string(mismatches) + " mismatches");
}

// --- criterion 6: taxonomy integrity ----------------------------------------

void criterion_6() {
    CliResult run = run_cli("taxonomy");
    bool ok = run.exit_code == 0 &&
              run.output.find("62 categories, 10 rule-bound") != std::string::npos;
    std::string detail = ok ? "" : "listing does not show 62/10";

    // embedded expectation table for the Top-10 anchors
    const std::map<std::string, std::string> expected = {
        {"insecure-configuration-management", "CWE-306"},
        {"insecure-dependency-management", "CWE-1104"},
        {"insecure-input-handling", "CWE-20"},
        {"outdated-dependencies", "CWE-1104"},
        {"path-traversal", "CWE-22"},
        {"command-injection", "CWE-77"},
        {"code-injection", "CWE-94"},
        {"outdated-software-version", "CWE-1104"},
        {"inadequate-naming-convention", "CWE-710"},
        {"sensitive-information-exposure", "CWE-256"},
    };
    if (ok) {
        Taxonomy taxonomy = Taxonomy::load_default();
        for (const auto& [id, cwe] : expected) {
            const SmellCategory* category = taxonomy.find(id);
            if (!category || !category->rule_bound || category->cwes.empty() ||
                category->cwes.front() != cwe) {
                ok = false;
                detail = id + " does not map to " + cwe;
            }
        }
    }
    report(6, "taxonomy lists 62 categories with exact Top-10 CWE anchors", ok, detail);
}

// --- criterion 7: persistence lifespans -------------------------------------

void criterion_7() {
    CliResult fix = run_cli("history " + g_root + "/tests/fixtures/history_fix");
    bool ok = fix.exit_code == 0;
    std::string detail;

    int records = 0;
    if (ok) {
        for (const auto& line : split_lines(fix.output)) {
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("fingerprint")) continue;
            ++records;
            ok = ok && j["first_index"] == 3 && j["fixed_at"] == "c0000007" &&
                 j["lifespan_commits"] == 4 && j["status"] == "fixed";
        }
        ok = ok && records == 1;
        if (!ok) detail = "fix fixture: wrong record shape";
    }

    if (ok) {
        CliResult rename = run_cli("history " + g_root + "/tests/fixtures/history_rename");
        int chains = 0;
        std::set<std::string> fingerprints;
        for (const auto& line : split_lines(rename.output)) {
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("fingerprint")) continue;
            ++chains;
            fingerprints.insert(j["fingerprint"].get<std::string>());
        }
        ok = rename.exit_code == 0 && chains == 2 && fingerprints.size() == 2;
        if (!ok) detail = "rename fixture: expected two distinct chains";
    }
    report(7, "history mining reports lifespan 4 and breaks chains on rename", ok, detail);
}

// --- criterion 8: determinism across worker counts --------------------------

void criterion_8() {
    std::string inputs = g_root + "/corpus/snippets " + g_root + "/tests/fixtures";
    CliResult serial = run_cli("lint " + inputs + " --format json --jobs 1");
    CliResult parallel = run_cli("lint " + inputs + " --format json --jobs 8");
    bool ok = serial.exit_code == parallel.exit_code && serial.output == parallel.output &&
              !serial.output.empty();
    report(8, "reports are byte-identical under --jobs 1 and --jobs 8", ok,
           ok ? "" : "outputs differ");
}

// --- criterion 9: throughput -------------------------------------------------

void criterion_9() {
    fs::path dir = fs::temp_directory_path() / "iacsmell_throughput";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::vector<std::string> templates = {
        "- name: p\n  hosts: all\n  tasks:\n    - name: t%d\n"
        "      command: \"apt-get {{ action_%d }}\"\n",
        "- name: p\n  hosts: all\n  tasks:\n    - name: t%d\n"
        "      apt:\n        name: \"pkg%d\"\n        state: present\n",
        "- name: p\n  hosts: all\n  tasks:\n    - name: t%d\n"
        "      lineinfile:\n        path: /etc/ssh/sshd_config\n"
        "        line: 'PermitRootLogin yes'\n",
        "- name: p\n  hosts: all\n  tasks:\n    - name: t%d\n"
        "      copy:\n        src: files/app%d.conf\n        dest: /etc/app%d.conf\n",
    };
    for (int i = 0; i < 1000; ++i) {
        char buffer[512];
        std::snprintf(buffer, sizeof(buffer),
                      templates[static_cast<std::size_t>(i) % templates.size()].c_str(), i, i,
                      i);
        std::ofstream out(dir / ("file_" + std::to_string(i) + ".yml"));
        out << buffer;
    }

    CliResult run = run_cli("lint " + dir.string() + " --format json");
    bool ok = (run.exit_code == 0 || run.exit_code == 1) && run.seconds < 5.0;
    json parsed = json::parse(run.output, nullptr, false);
    ok = ok && !parsed.is_discarded() && parsed["summary"]["files_scanned"] == 1000;
    fs::remove_all(dir);
    report(9, "1,000 small files lint in under five seconds", ok,
           "took " + std::to_string(run.seconds) + "s");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance_tests <iacsmell-binary> <source-root>\n";
        return 2;
    }
    g_binary = argv[1];
    g_root = argv[2];

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();

    if (g_failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " acceptance criteria failed\n";
    return 1;
}
