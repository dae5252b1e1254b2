#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "iacsmell/rules.hpp"

namespace iacsmell::evalharness {

struct Expectation {
    std::string rule_id;
    std::optional<int> line;  // 1-based; matched within +/-2 lines when given
};

struct CorpusEntry {
    std::string id;
    ToolKind tool = ToolKind::Ansible;
    std::string snippet_path;  // relative to the manifest directory
    std::vector<Expectation> expected;
    std::string provenance;
};

struct CorpusError : std::runtime_error {
    explicit CorpusError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CellStats {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::optional<double> precision() const;
    std::optional<double> recall() const;
    CellStats& operator+=(const CellStats& other);
};

struct EvalReport {
    // (tool name, rule id) -> counts
    std::map<std::pair<std::string, std::string>, CellStats> cells;
    std::map<std::string, CellStats> per_tool;
    std::map<std::string, CellStats> per_rule;
    CellStats overall;
    std::vector<std::string> tools;  // column order, deterministic

    bool operator==(const EvalReport& other) const;
};

std::vector<CorpusEntry> load_manifest(const std::string& manifest_path);

// Scores detections against expectations with a maximum one-to-one
// assignment per (entry, rule); unmatched detections are fp, unmatched
// expectations fn. Throws CorpusError when a snippet file is missing.
EvalReport evaluate_corpus(const std::vector<CorpusEntry>& corpus, const std::string& base_dir,
                           const AdvisoryDb& advisory, const Lexicons& lexicons);

// Rule rows x tool columns, "--" for undefined cells.
std::string render_text(const EvalReport& report);
nlohmann::ordered_json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

}  // namespace iacsmell::evalharness
