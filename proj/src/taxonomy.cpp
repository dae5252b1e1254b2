#include "iacsmell/taxonomy.hpp"

#include <regex>
#include <set>
#include <sstream>

#include "iacsmell/builtin_data.hpp"
#include "iacsmell/line_records.hpp"

namespace iacsmell {

namespace {

const std::regex kCwePattern("^CWE-[0-9]+$");
const std::regex kSlugPattern("^[a-z0-9]+(-[a-z0-9]+)*$");

bool parse_bool(const std::string& text, const std::string& field, int line) {
    std::string lower = to_lower(text);
    if (lower == "true" || lower == "1" || lower == "yes") return true;
    if (lower == "false" || lower == "0" || lower == "no") return false;
    throw TaxonomyError("line " + std::to_string(line) + ": invalid boolean for " + field +
                            ": '" + text + "'",
                        line);
}

}  // namespace

Taxonomy Taxonomy::parse(std::string_view text, const std::string& source_name, bool strict,
                         std::vector<Diagnostic>* warnings) {
    Taxonomy taxonomy;
    std::set<std::string> seen_ids;
    for (const auto& record : parse_line_records(text)) {
        if (record.fields.size() < 5 || record.fields.size() > 6) {
            throw TaxonomyError(source_name + ": line " + std::to_string(record.line) +
                                    ": expected 5 or 6 fields, got " +
                                    std::to_string(record.fields.size()),
                                record.line);
        }
        SmellCategory category;
        category.id = record.fields[0];
        category.name = record.fields[1];
        if (!std::regex_match(category.id, kSlugPattern)) {
            throw TaxonomyError(source_name + ": line " + std::to_string(record.line) +
                                    ": id is not lowercase-kebab: '" + category.id + "'",
                                record.line);
        }
        if (!seen_ids.insert(category.id).second) {
            throw TaxonomyError(source_name + ": line " + std::to_string(record.line) +
                                    ": duplicate category id '" + category.id + "'",
                                record.line);
        }
        for (auto& cwe : split(record.fields[2], ',')) {
            std::string trimmed = trim(cwe);
            if (trimmed.empty()) continue;
            if (!std::regex_match(trimmed, kCwePattern)) {
                throw TaxonomyError(source_name + ": line " + std::to_string(record.line) +
                                        ": malformed CWE identifier '" + trimmed + "'",
                                    record.line);
            }
            category.cwes.push_back(trimmed);
        }
        category.rule_bound = parse_bool(record.fields[3], "rule_bound", record.line);
        category.description = record.fields[4];
        if (record.fields.size() == 6 && !record.fields[5].empty()) {
            category.provisional = parse_bool(record.fields[5], "provisional", record.line);
        }
        taxonomy.categories_.push_back(std::move(category));
    }

    int rule_bound = 0;
    for (const auto& c : taxonomy.categories_)
        if (c.rule_bound) ++rule_bound;

    auto complain = [&](const std::string& msg) {
        if (strict) throw TaxonomyError(source_name + ": " + msg);
        if (warnings) warnings->push_back({source_name + ": " + msg, {}});
    };
    if (static_cast<int>(taxonomy.categories_.size()) != kExpectedCategoryCount) {
        complain("category count mismatch: expected " + std::to_string(kExpectedCategoryCount) +
                 ", got " + std::to_string(taxonomy.categories_.size()));
    }
    if (rule_bound != kExpectedRuleBoundCount) {
        complain("rule-bound count mismatch: expected " +
                 std::to_string(kExpectedRuleBoundCount) + ", got " + std::to_string(rule_bound));
    }
    return taxonomy;
}

Taxonomy Taxonomy::load_default() {
    // The bundled data must satisfy the counts; strict enforces that.
    return parse(builtin_taxonomy_text(), "<builtin taxonomy>", /*strict=*/true);
}

Taxonomy Taxonomy::load_file(const std::string& path, bool strict,
                             std::vector<Diagnostic>* warnings) {
    return parse(read_text_file(path), path, strict, warnings);
}

const SmellCategory* Taxonomy::find(std::string_view id) const {
    for (const auto& c : categories_)
        if (c.id == id) return &c;
    return nullptr;
}

std::vector<const SmellCategory*> Taxonomy::categories_for_cwe(std::string_view cwe) const {
    std::vector<const SmellCategory*> out;
    for (const auto& c : categories_) {
        for (const auto& candidate : c.cwes) {
            if (candidate == cwe) {
                out.push_back(&c);
                break;
            }
        }
    }
    return out;
}

std::vector<std::string> Taxonomy::rule_bound_ids() const {
    std::vector<std::string> ids;
    for (const auto& c : categories_)
        if (c.rule_bound) ids.push_back(c.id);
    return ids;
}

std::string Taxonomy::serialize() const {
    std::ostringstream out;
    out << "# id|name|cwes|rule_bound|description|provisional\n";
    for (const auto& c : categories_) {
        out << c.id << '|' << c.name << '|';
        for (std::size_t i = 0; i < c.cwes.size(); ++i) {
            if (i) out << ',';
            out << c.cwes[i];
        }
        out << '|' << (c.rule_bound ? "true" : "false") << '|' << c.description << '|'
            << (c.provisional ? "true" : "false") << '\n';
    }
    return out.str();
}

}  // namespace iacsmell
