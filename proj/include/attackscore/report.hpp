#pragma once

// Renderers for a Scorecard: fixed-column text, structured JSON and an
// ATT&CK Navigator layer. All output is deterministic for a given scorecard.

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "attackscore/assessment.hpp"
#include "attackscore/catalog.hpp"
#include "attackscore/score_core.hpp"

namespace attackscore {

std::string_view verdict_message(ProtectionCategory band);
Verdict verdict(const ProtectionScore& total, const ScoringConstants& consts = default_constants());

std::string render_text(const Scorecard& card);

inline constexpr std::string_view kScorecardSchema = "attackscore.scorecard/1";

nlohmann::ordered_json scorecard_to_json(const Scorecard& card);
// Throws Error(Schema) naming the field.
Scorecard scorecard_from_json(const nlohmann::ordered_json& doc);

std::string render_structured(const Scorecard& card);
Scorecard parse_structured(std::string_view document);

struct LayerOptions {
    std::string name = "Protection scorecard";
    std::string layer_version = "4.5";
    std::string navigator_version = "5.1.0";
};

// One entry per scored (technique, tactic) pair; untested techniques are
// omitted. Scores are the rounded per-technique percents.
std::string render_navigator_layer(const Scorecard& card, const LabeledCatalog& catalog,
                                   const LayerOptions& options = {});

enum class OutputFormat { Text, Structured, Layer };
std::optional<OutputFormat> parse_output_format(std::string_view name);
std::string render(const Scorecard& card, const LabeledCatalog& catalog, OutputFormat format,
                   const LayerOptions& options = {});

}  // namespace attackscore
