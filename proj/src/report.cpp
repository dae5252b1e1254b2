#include "iacsmell/report.hpp"

#include <ostream>

namespace iacsmell::report {

void write_text(const std::vector<rules::Finding>& findings, std::ostream& out, bool color) {
    const char* bold = color ? "\033[1m" : "";
    const char* reset = color ? "\033[0m" : "";
    for (const auto& f : findings) {
        out << f.path << ':' << f.span.start_line << ':' << f.span.start_col << ' ' << bold
            << '[' << f.rule_id << '/' << f.cwe << ']' << reset << ' ' << f.message << '\n';
    }
}

nlohmann::ordered_json findings_json(const std::vector<rules::Finding>& findings,
                                     std::size_t files_scanned) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
        nlohmann::ordered_json item;
        item["rule_id"] = f.rule_id;
        item["category"] = f.category;
        item["cwe"] = f.cwe;
        item["severity"] = rules::to_string(f.severity);
        item["path"] = f.path;
        item["line"] = f.span.start_line;
        item["column"] = f.span.start_col;
        item["end_line"] = f.span.end_line;
        item["end_column"] = f.span.end_col;
        item["snippet"] = f.snippet;
        item["message"] = f.message;
        item["fingerprint"] = f.fingerprint;
        nlohmann::ordered_json evidence = nlohmann::ordered_json::array();
        for (const auto& e : f.evidence) {
            evidence.push_back({{"line", e.span.start_line},
                                {"column", e.span.start_col},
                                {"text", e.text}});
        }
        item["evidence"] = std::move(evidence);
        list.push_back(std::move(item));
    }
    j["findings"] = std::move(list);
    nlohmann::ordered_json by_rule = nlohmann::ordered_json::object();
    for (const auto& f : findings) {
        by_rule[f.rule_id] = by_rule.value(f.rule_id, 0) + 1;
    }
    j["summary"] = {{"files_scanned", files_scanned},
                    {"findings", findings.size()},
                    {"by_rule", std::move(by_rule)}};
    return j;
}

}  // namespace iacsmell::report
