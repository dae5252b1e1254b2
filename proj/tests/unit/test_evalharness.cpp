#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "iacsmell/evalharness.hpp"
#include "iacsmell/line_records.hpp"

using namespace iacsmell;
using namespace iacsmell::evalharness;

namespace {

struct Env {
    AdvisoryDb advisory = AdvisoryDb::load_default();
    const Lexicons& lexicons = Lexicons::defaults();
    std::string corpus_dir = std::string(IACSMELL_SOURCE_DIR) + "/corpus";
};

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("iacsmell_eval_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("ansible pack scores precision 1.00 recall 1.00 on the bundled corpus") {
    Env env;
    auto corpus = load_manifest(env.corpus_dir + "/manifest.jsonl");
    REQUIRE(corpus.size() == 45);

    // the ansible pack alone (transcribed smelly tasks plus clean counterparts)
    std::vector<CorpusEntry> ansible_pack;
    for (const auto& entry : corpus) {
        if (entry.tool == ToolKind::Ansible) ansible_pack.push_back(entry);
    }
    REQUIRE(ansible_pack.size() == 15);
    auto report = evaluate_corpus(ansible_pack, env.corpus_dir, env.advisory, env.lexicons);
    auto precision = report.per_tool.at("ansible").precision();
    auto recall = report.per_tool.at("ansible").recall();
    REQUIRE(precision.has_value());
    REQUIRE(recall.has_value());
    CHECK(*precision == doctest::Approx(1.0));
    CHECK(*recall == doctest::Approx(1.0));
    CHECK(report.overall.fp == 0);
    CHECK(report.overall.fn == 0);
    CHECK(report.overall.tp == 10);
}

TEST_CASE("a clean snippet wrongly expected smelly becomes a false negative") {
    Env env;
    auto dir = temp_dir("fn");
    write_file(dir / "clean.yml",
               "- name: p\n  hosts: all\n  tasks:\n"
               "    - name: t\n      command: \"apt-get update\"\n");
    CorpusEntry entry;
    entry.id = "wrong";
    entry.tool = ToolKind::Ansible;
    entry.snippet_path = "clean.yml";
    entry.expected.push_back({"command-injection", std::nullopt});

    auto report = evaluate_corpus({entry}, dir.string(), env.advisory, env.lexicons);
    CHECK(report.overall.fn == 1);
    CHECK(report.overall.tp == 0);
    auto recall = report.per_rule.at("command-injection").recall();
    REQUIRE(recall.has_value());
    CHECK(*recall < 1.0);
}

TEST_CASE("matching is a maximum one-to-one assignment per (entry, rule)") {
    Env env;
    auto dir = temp_dir("match");
    // two identical smells, one expectation: one tp, one fp
    write_file(dir / "double.yml",
               "- name: p\n  hosts: all\n  tasks:\n"
               "    - name: a\n      command: \"apt-get {{ x }}\"\n"
               "    - name: b\n      command: \"apt-get {{ y }}\"\n");
    CorpusEntry entry;
    entry.id = "double";
    entry.tool = ToolKind::Ansible;
    entry.snippet_path = "double.yml";
    entry.expected.push_back({"command-injection", 5});

    auto report = evaluate_corpus({entry}, dir.string(), env.advisory, env.lexicons);
    CHECK(report.overall.tp == 1);
    CHECK(report.overall.fp == 1);
    CHECK(report.overall.fn == 0);

    // with both expected, the assignment matches both within tolerance
    entry.expected.push_back({"command-injection", 7});
    report = evaluate_corpus({entry}, dir.string(), env.advisory, env.lexicons);
    CHECK(report.overall.tp == 2);
    CHECK(report.overall.fp == 0);
    CHECK(report.overall.fn == 0);
}

TEST_CASE("line tolerance is +/-2") {
    Env env;
    auto dir = temp_dir("tol");
    write_file(dir / "one.yml",
               "- name: p\n  hosts: all\n  tasks:\n"
               "    - name: t\n      command: \"apt-get {{ x }}\"\n");
    CorpusEntry entry;
    entry.id = "one";
    entry.tool = ToolKind::Ansible;
    entry.snippet_path = "one.yml";

    entry.expected = {{"command-injection", 7}};  // finding is on line 5
    auto report = evaluate_corpus({entry}, dir.string(), env.advisory, env.lexicons);
    CHECK(report.overall.tp == 1);

    entry.expected = {{"command-injection", 8}};
    report = evaluate_corpus({entry}, dir.string(), env.advisory, env.lexicons);
    CHECK(report.overall.tp == 0);
    CHECK(report.overall.fp == 1);
    CHECK(report.overall.fn == 1);
}

TEST_CASE("duplicate detections recount: brute-force agreement on a 5-entry corpus") {
    Env env;
    auto corpus_full = load_manifest(env.corpus_dir + "/manifest.jsonl");
    std::vector<CorpusEntry> five(corpus_full.begin(), corpus_full.begin() + 5);
    auto report = evaluate_corpus(five, env.corpus_dir, env.advisory, env.lexicons);

    // independent recount: evaluate each snippet, dedupe detections by
    // fingerprint, greedily match expectations by rule and tolerance
    int tp = 0, fp = 0, fn = 0;
    for (const auto& entry : five) {
        std::string content =
            read_text_file(env.corpus_dir + "/" + entry.snippet_path);
        ParsedFile file = parse(content, entry.tool, entry.snippet_path);
        PredicateContext ctx{&file, &env.advisory, &env.lexicons};
        auto findings = rules::evaluate(file, ctx);
        std::vector<std::pair<std::string, int>> detections;
        for (const auto& f : findings) {
            bool dup = false;
            for (const auto& d : detections)
                dup = dup || (d.first == f.rule_id && d.second == f.span.start_line);
            if (!dup) detections.push_back({f.rule_id, f.span.start_line});
        }
        std::vector<bool> used(entry.expected.size(), false);
        for (const auto& [rule, line] : detections) {
            bool matched = false;
            for (std::size_t e = 0; e < entry.expected.size() && !matched; ++e) {
                if (used[e] || entry.expected[e].rule_id != rule) continue;
                if (entry.expected[e].line && std::abs(*entry.expected[e].line - line) > 2)
                    continue;
                used[e] = true;
                matched = true;
            }
            matched ? ++tp : ++fp;
        }
        for (bool u : used) fn += u ? 0 : 1;
    }
    CHECK(report.overall.tp == tp);
    CHECK(report.overall.fp == fp);
    CHECK(report.overall.fn == fn);
}

TEST_CASE("text rendering marks undefined cells with --") {
    EvalReport report;
    report.tools = {"ansible", "puppet"};
    CellStats hit;
    hit.tp = 3;
    report.cells[{"ansible", "command-injection"}] = hit;
    report.per_tool["ansible"] += hit;
    report.per_tool["puppet"] += CellStats{};
    report.overall += hit;

    std::string text = render_text(report);
    CHECK(text.find("1.00") != std::string::npos);
    CHECK(text.find("--") != std::string::npos);

    EvalReport empty;
    std::string header_only = render_text(empty);
    CHECK(header_only.find("rule") != std::string::npos);
}

TEST_CASE("json round-trips to an equal report") {
    Env env;
    auto corpus = load_manifest(env.corpus_dir + "/manifest.jsonl");
    auto report = evaluate_corpus(corpus, env.corpus_dir, env.advisory, env.lexicons);
    auto j = to_json(report);
    EvalReport back = report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(report == back);
}

TEST_CASE("precision and recall stay within [0,1] whenever defined") {
    Env env;
    auto corpus = load_manifest(env.corpus_dir + "/manifest.jsonl");
    auto report = evaluate_corpus(corpus, env.corpus_dir, env.advisory, env.lexicons);
    for (const auto& [key, stats] : report.cells) {
        if (auto p = stats.precision()) {
            CHECK(*p >= 0.0);
            CHECK(*p <= 1.0);
        }
        if (auto r = stats.recall()) {
            CHECK(*r >= 0.0);
            CHECK(*r <= 1.0);
        }
    }
}

TEST_CASE("missing snippet files are reported by entry id") {
    Env env;
    CorpusEntry entry;
    entry.id = "ghost-entry";
    entry.tool = ToolKind::Ansible;
    entry.snippet_path = "does/not/exist.yml";
    try {
        evaluate_corpus({entry}, "/tmp", env.advisory, env.lexicons);
        FAIL("expected CorpusError");
    } catch (const CorpusError& e) {
        CHECK(std::string(e.what()).find("ghost-entry") != std::string::npos);
    }
}

TEST_CASE("manifest parse errors are reported with their location") {
    auto dir = temp_dir("manifest");
    write_file(dir / "bad.jsonl", "{not json\n");
    CHECK_THROWS_AS(load_manifest((dir / "bad.jsonl").string()), CorpusError);
    write_file(dir / "incomplete.jsonl", "{\"tool\": \"ansible\"}\n");
    CHECK_THROWS_AS(load_manifest((dir / "incomplete.jsonl").string()), CorpusError);
}
