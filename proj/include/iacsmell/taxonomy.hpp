#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iacsmell/source_span.hpp"

namespace iacsmell {

struct SmellCategory {
    std::string id;                  // lowercase-kebab slug
    std::string name;                // human label
    std::vector<std::string> cwes;   // e.g. "CWE-306"
    bool rule_bound = false;         // true iff a detection rule exists
    std::string description;
    bool provisional = false;        // placeholder row, label not authoritative

    bool operator==(const SmellCategory&) const = default;
};

struct TaxonomyError : std::runtime_error {
    int line;
    explicit TaxonomyError(const std::string& msg, int line_no = 0)
        : std::runtime_error(msg), line(line_no) {}
};

constexpr int kExpectedCategoryCount = 62;
constexpr int kExpectedRuleBoundCount = 10;

class Taxonomy {
  public:
    static Taxonomy load_default();
    static Taxonomy load_file(const std::string& path, bool strict = false,
                              std::vector<Diagnostic>* warnings = nullptr);
    static Taxonomy parse(std::string_view text, const std::string& source_name,
                          bool strict = false, std::vector<Diagnostic>* warnings = nullptr);

    const std::vector<SmellCategory>& categories() const { return categories_; }
    const SmellCategory* find(std::string_view id) const;
    std::vector<const SmellCategory*> categories_for_cwe(std::string_view cwe) const;
    std::vector<std::string> rule_bound_ids() const;
    std::string serialize() const;

  private:
    std::vector<SmellCategory> categories_;
};

}  // namespace iacsmell
