#include "iacsmell/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "iacsmell/frontends.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell::evalharness {

std::optional<double> CellStats::precision() const {
    if (tp + fp == 0) return std::nullopt;
    return static_cast<double>(tp) / (tp + fp);
}

std::optional<double> CellStats::recall() const {
    if (tp + fn == 0) return std::nullopt;
    return static_cast<double>(tp) / (tp + fn);
}

CellStats& CellStats::operator+=(const CellStats& other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    return *this;
}

bool EvalReport::operator==(const EvalReport& other) const {
    auto cell_eq = [](const CellStats& a, const CellStats& b) {
        return a.tp == b.tp && a.fp == b.fp && a.fn == b.fn;
    };
    if (cells.size() != other.cells.size()) return false;
    for (const auto& [key, stats] : cells) {
        auto it = other.cells.find(key);
        if (it == other.cells.end() || !cell_eq(stats, it->second)) return false;
    }
    return cell_eq(overall, other.overall) && tools == other.tools;
}

std::vector<CorpusEntry> load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw CorpusError("cannot open corpus manifest: " + manifest_path);
    std::vector<CorpusEntry> corpus;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(stripped);
        } catch (const nlohmann::json::exception& e) {
            throw CorpusError(manifest_path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        CorpusEntry entry;
        entry.id = j.value("id", "");
        auto tool = tool_from_string(j.value("tool", ""));
        if (entry.id.empty() || !tool) {
            throw CorpusError(manifest_path + ":" + std::to_string(line_no) +
                              ": entry needs an id and a valid tool");
        }
        entry.tool = *tool;
        entry.snippet_path = j.value("snippet", "");
        entry.provenance = j.value("provenance", "");
        for (const auto& e : j.value("expected", nlohmann::json::array())) {
            Expectation expectation;
            expectation.rule_id = e.value("rule", "");
            if (e.contains("line")) expectation.line = e["line"].get<int>();
            entry.expected.push_back(std::move(expectation));
        }
        corpus.push_back(std::move(entry));
    }
    return corpus;
}

namespace {

// maximum one-to-one assignment between detections and expectations of one
// rule within one entry (augmenting paths; the sets are tiny)
int max_matching(const std::vector<int>& detection_lines,
                 const std::vector<std::optional<int>>& expected_lines, int tolerance) {
    std::size_t nd = detection_lines.size();
    std::size_t ne = expected_lines.size();
    std::vector<std::vector<bool>> ok(nd, std::vector<bool>(ne, false));
    for (std::size_t d = 0; d < nd; ++d) {
        for (std::size_t e = 0; e < ne; ++e) {
            ok[d][e] = !expected_lines[e] ||
                       std::abs(detection_lines[d] - *expected_lines[e]) <= tolerance;
        }
    }
    std::vector<int> match_of_expected(ne, -1);
    std::function<bool(std::size_t, std::vector<bool>&)> try_assign =
        [&](std::size_t d, std::vector<bool>& visited) {
            for (std::size_t e = 0; e < ne; ++e) {
                if (!ok[d][e] || visited[e]) continue;
                visited[e] = true;
                if (match_of_expected[e] < 0 ||
                    try_assign(static_cast<std::size_t>(match_of_expected[e]), visited)) {
                    match_of_expected[e] = static_cast<int>(d);
                    return true;
                }
            }
            return false;
        };
    int matched = 0;
    for (std::size_t d = 0; d < nd; ++d) {
        std::vector<bool> visited(ne, false);
        if (try_assign(d, visited)) ++matched;
    }
    return matched;
}

}  // namespace

EvalReport evaluate_corpus(const std::vector<CorpusEntry>& corpus, const std::string& base_dir,
                           const AdvisoryDb& advisory, const Lexicons& lexicons) {
    EvalReport report;
    std::vector<std::string> tool_order;

    for (const auto& entry : corpus) {
        std::string path = entry.snippet_path;
        if (!path.empty() && path[0] != '/' && !base_dir.empty())
            path = base_dir + "/" + path;
        std::string content;
        try {
            content = read_text_file(path);
        } catch (const std::exception&) {
            throw CorpusError("corpus entry '" + entry.id + "': missing snippet file " + path);
        }

        ParsedFile file = parse(content, entry.tool, entry.snippet_path);
        PredicateContext ctx{&file, &advisory, &lexicons};
        auto findings = rules::evaluate(file, ctx);

        std::string tool_name = to_string(entry.tool);
        bool known_tool = false;
        for (const auto& t : tool_order) known_tool = known_tool || t == tool_name;
        if (!known_tool) tool_order.push_back(tool_name);

        // bucket detections and expectations by rule, deduplicating repeated
        // detections on one node
        std::map<std::string, std::vector<int>> detections;
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& finding : findings) {
            if (!seen.insert({finding.rule_id, finding.fingerprint}).second) continue;
            detections[finding.rule_id].push_back(finding.span.start_line);
        }
        std::map<std::string, std::vector<std::optional<int>>> expectations;
        for (const auto& e : entry.expected) expectations[e.rule_id].push_back(e.line);

        std::set<std::string> rules_touched;
        for (const auto& [rule, lines] : detections) rules_touched.insert(rule);
        for (const auto& [rule, lines] : expectations) rules_touched.insert(rule);

        for (const auto& rule : rules_touched) {
            const auto& det = detections[rule];
            const auto& exp = expectations[rule];
            int matched = max_matching(det, exp, 2);
            CellStats delta;
            delta.tp = matched;
            delta.fp = static_cast<int>(det.size()) - matched;
            delta.fn = static_cast<int>(exp.size()) - matched;
            report.cells[{tool_name, rule}] += delta;
            report.per_tool[tool_name] += delta;
            report.per_rule[rule] += delta;
            report.overall += delta;
        }
        // clean entries with no activity still register the tool column
        report.per_tool[tool_name] += CellStats{};
    }

    std::sort(tool_order.begin(), tool_order.end());
    report.tools = std::move(tool_order);
    return report;
}

namespace {

std::string format_cell(const std::optional<double>& value) {
    if (!value) return "--";
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << *value;
    return out.str();
}

}  // namespace

std::string render_text(const EvalReport& report) {
    std::vector<std::string> rule_rows;
    for (const auto& rule : rules::registry()) rule_rows.push_back(rule.id);

    std::size_t name_width = std::string("overall").size();
    for (const auto& id : rule_rows) name_width = std::max(name_width, id.size());

    std::ostringstream out;
    out << "precision (tp / tp+fp), \"--\" where a cell saw no detections\n\n";
    out << std::left << std::setw(static_cast<int>(name_width) + 2) << "rule";
    for (const auto& tool : report.tools) out << std::setw(12) << tool;
    out << "\n";
    for (const auto& rule : rule_rows) {
        out << std::setw(static_cast<int>(name_width) + 2) << rule;
        for (const auto& tool : report.tools) {
            auto it = report.cells.find({tool, rule});
            out << std::setw(12)
                << (it == report.cells.end() ? "--" : format_cell(it->second.precision()));
        }
        out << "\n";
    }
    out << std::setw(static_cast<int>(name_width) + 2) << "overall";
    for (const auto& tool : report.tools) {
        auto it = report.per_tool.find(tool);
        out << std::setw(12)
            << (it == report.per_tool.end() ? "--" : format_cell(it->second.precision()));
    }
    out << "\n\nrecall by tool:";
    for (const auto& tool : report.tools) {
        auto it = report.per_tool.find(tool);
        out << "  " << tool << "="
            << (it == report.per_tool.end() ? "--" : format_cell(it->second.recall()));
    }
    out << "\noverall: precision=" << format_cell(report.overall.precision())
        << " recall=" << format_cell(report.overall.recall()) << " tp=" << report.overall.tp
        << " fp=" << report.overall.fp << " fn=" << report.overall.fn << "\n";
    return out.str();
}

nlohmann::ordered_json to_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["tools"] = report.tools;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& [key, stats] : report.cells) {
        nlohmann::ordered_json cell;
        cell["tool"] = key.first;
        cell["rule"] = key.second;
        cell["tp"] = stats.tp;
        cell["fp"] = stats.fp;
        cell["fn"] = stats.fn;
        if (auto p = stats.precision()) cell["precision"] = *p;
        if (auto r = stats.recall()) cell["recall"] = *r;
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    j["overall"] = {{"tp", report.overall.tp},
                    {"fp", report.overall.fp},
                    {"fn", report.overall.fn}};
    return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
    EvalReport report;
    for (const auto& tool : j.value("tools", nlohmann::json::array()))
        report.tools.push_back(tool.get<std::string>());
    for (const auto& cell : j.value("cells", nlohmann::json::array())) {
        CellStats stats;
        stats.tp = cell.value("tp", 0);
        stats.fp = cell.value("fp", 0);
        stats.fn = cell.value("fn", 0);
        std::string tool = cell.value("tool", "");
        std::string rule = cell.value("rule", "");
        report.cells[{tool, rule}] = stats;
        report.per_tool[tool] += stats;
        report.per_rule[rule] += stats;
        report.overall += stats;
    }
    return report;
}

}  // namespace iacsmell::evalharness
