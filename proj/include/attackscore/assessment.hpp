#pragma once

// Engagement records and the scorecard computed from them.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "attackscore/catalog.hpp"
#include "attackscore/score_core.hpp"
#include "attackscore/timestamp.hpp"

namespace attackscore {

struct TechniqueExecution {
    std::string technique_id;
    std::string tactic;  // tactic shortname the technique was executed under
    Status status = Status::Success;
    Timestamp observed_at{};
    std::string note;

    friend bool operator==(const TechniqueExecution&, const TechniqueExecution&) = default;
};

// Executions are kept in non-decreasing observed_at order.
struct Assessment {
    std::string id;
    std::string target_name;
    Timestamp created_at{};
    std::vector<TechniqueExecution> executions;

    friend bool operator==(const Assessment&, const Assessment&) = default;
};

// Random 32-hex-digit identifier.
std::string generate_assessment_id();
// 1-64 characters from [A-Za-z0-9._-], not starting with '.'.
bool is_assessment_id(std::string_view id);

Assessment new_assessment(std::string target_name, Timestamp created_at = now_utc(),
                          std::string id = generate_assessment_id());

// Throws Error(NotInCatalog) for an unknown technique and
// Error(TacticMismatch) when the technique is not mapped to the tactic.
void validate_execution(std::string_view technique_id, std::string_view tactic,
                        const LabeledCatalog& catalog);

// Returns the assessment with the execution appended. Also throws
// Error(OutOfOrder) when observed_at precedes the last execution.
Assessment record(Assessment assessment, TechniqueExecution execution,
                  const LabeledCatalog& catalog);

struct EffectiveResult {
    std::string technique_id;
    std::string tactic;
    Status status = Status::Success;

    friend bool operator==(const EffectiveResult&, const EffectiveResult&) = default;
};

// One entry per (technique, tactic): the latest status, in order of first
// occurrence.
std::vector<EffectiveResult> effective_results(const Assessment& assessment);

struct TechniqueScore {
    std::string technique_id;
    std::string name;
    std::string tactic;
    SeverityLevel exploitability = SeverityLevel::Medium;
    SeverityLevel impact = SeverityLevel::Medium;
    Status status = Status::Success;
    LabelSource label_source = LabelSource::Curated;
    ProtectionScore score;

    friend bool operator==(const TechniqueScore&, const TechniqueScore&) = default;
};

struct TacticScore {
    std::string tactic;
    ProtectionScore score;
    std::size_t techniques = 0;

    friend bool operator==(const TacticScore&, const TacticScore&) = default;
};

struct Verdict {
    ProtectionCategory band = ProtectionCategory::Medium;
    std::string message;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct Scorecard {
    std::string assessment_id;
    std::string target_name;
    std::vector<TechniqueScore> per_technique;
    std::vector<TacticScore> per_tactic;  // catalog tactic order
    ProtectionScore total;
    double coverage_percent = 0.0;
    std::size_t tested_techniques = 0;
    std::size_t catalog_techniques = 0;
    Verdict verdict;
    Timestamp computed_at{};  // latest observed_at among the executions
    double adjustment = 0.0;
    std::string constants_fingerprint;

    friend bool operator==(const Scorecard&, const Scorecard&) = default;
};

// Throws Error(NoResults) with "no results to score" for an empty assessment.
Scorecard compute_scorecard(const Assessment& assessment, const LabeledCatalog& catalog,
                            const ScoringConstants& consts);

struct ResultOverride {
    std::string technique_id;
    std::string tactic;
    Status status = Status::Success;
};

// Scorecard as if the overrides replaced or extended the effective results.
// The assessment is not modified.
Scorecard what_if(const Assessment& assessment, std::span<const ResultOverride> overrides,
                  const LabeledCatalog& catalog, const ScoringConstants& consts);

}  // namespace attackscore
