#pragma once

#include <string_view>

namespace iacsmell {

// Bundled defaults, embedded at build time from data/*.txt.
std::string_view builtin_taxonomy_text();
std::string_view builtin_lexicons_text();
std::string_view builtin_advisories_text();

}  // namespace iacsmell
