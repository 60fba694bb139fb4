#pragma once

// Label files are tab-separated, one technique per line:
//
//   T1123<TAB>high<TAB>medium<TAB>free-text rationale
//
// Columns are technique id, impact, exploitability and an optional rationale.
// Severity tokens are case-insensitive. Blank lines and lines starting with
// '#' are ignored.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "attackscore/catalog.hpp"

namespace attackscore {

struct LabelParseResult {
    std::vector<TechniqueLabel> labels;
    std::vector<std::string> diagnostics;  // e.g. duplicates, last one wins
};

// Throws Error(UnknownSeverity) or Error(MalformedId) naming the line.
LabelParseResult parse_labels(std::string_view document);

LabelParseResult load_labels(const std::filesystem::path& path);

}  // namespace attackscore
