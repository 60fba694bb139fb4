#pragma once

// Scoring-constant overrides from a JSON config file and from command-line
// strings. Command-line values are applied after the file, so they win.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "attackscore/score_core.hpp"

namespace attackscore {

struct ConstantsOverrides {
    std::optional<double> adjustment;
    std::optional<std::array<double, 4>> band_edges;
    std::vector<std::pair<ProtectionCategory, double>> category_weights;
    std::vector<std::tuple<SeverityLevel, Status, double>> severity_weights;

    void merge(const ConstantsOverrides& later);
    ScoringConstants apply(ScoringConstants base = {}) const;
};

struct FileConfig {
    std::optional<std::filesystem::path> catalog;
    std::optional<std::filesystem::path> labels;
    ConstantsOverrides constants;
};

// {
//   "catalog": "enterprise-attack.json",
//   "labels": "seed_labels.tsv",
//   "constants": {
//     "a": 1.1,
//     "band_edges": [20, 40, 60, 80],
//     "category_weights": {"very_low": 0.1, "low": 0.2, ...},
//     "severity_weights": {"high": {"success": 9, "failure": 9.5}, ...}
//   }
// }
// Relative paths resolve against the config file's directory.
FileConfig load_config_file(const std::filesystem::path& path);

// "20,40,60,80"
std::array<double, 4> parse_band_edges(std::string_view text);
// "very_high=1,high=0.8"
std::vector<std::pair<ProtectionCategory, double>> parse_category_weights(std::string_view text);

}  // namespace attackscore
