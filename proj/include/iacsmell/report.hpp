#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "iacsmell/rules.hpp"

namespace iacsmell::report {

constexpr int kSchemaVersion = 1;

// One line per finding: path:line:col [RULE-ID/CWE] message
void write_text(const std::vector<rules::Finding>& findings, std::ostream& out,
                bool color = false);

nlohmann::ordered_json findings_json(const std::vector<rules::Finding>& findings,
                                     std::size_t files_scanned);

}  // namespace iacsmell::report
