#include "attackscore/assessment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <random>
#include <unordered_map>

#include "attackscore/error.hpp"
#include "attackscore/report.hpp"
#include "attackscore/score_kernels.hpp"

namespace attackscore {

namespace {

std::string result_key(std::string_view technique_id, std::string_view tactic)
{
    std::string key(technique_id);
    key += '\x1f';
    key += tactic;
    return key;
}

Scorecard score_results(const Assessment& assessment, const std::vector<EffectiveResult>& results,
                        const LabeledCatalog& catalog, const ScoringConstants& consts)
{
    if (results.empty()) {
        throw Error(ErrorCode::NoResults, "no results to score");
    }

    Scorecard card;
    card.assessment_id = assessment.id;
    card.target_name = assessment.target_name;
    card.computed_at = assessment.executions.empty() ? assessment.created_at
                                                     : assessment.executions.back().observed_at;
    card.adjustment = consts.adjustment();
    card.constants_fingerprint = consts.fingerprint();

    std::vector<kernels::ScoreInput> inputs;
    inputs.reserve(results.size());
    card.per_technique.reserve(results.size());
    for (const auto& r : results) {
        validate_execution(r.technique_id, r.tactic, catalog);
        const auto& lt = *catalog.find(r.technique_id);
        inputs.push_back({lt.label.exploitability, lt.label.impact, r.status});
        card.per_technique.push_back(TechniqueScore{r.technique_id, lt.technique.name, r.tactic,
                                                    lt.label.exploitability, lt.label.impact,
                                                    r.status, lt.label.source, {}});
    }

    std::vector<ProtectionScore> scores(inputs.size());
    kernels::score_batch(inputs, scores, consts);
    for (std::size_t k = 0; k < scores.size(); ++k) card.per_technique[k].score = scores[k];

    for (const auto& tactic : catalog.tactics()) {
        std::vector<ProtectionScore> group;
        for (const auto& ts : card.per_technique) {
            if (ts.tactic == tactic.shortname) group.push_back(ts.score);
        }
        if (!group.empty()) {
            card.per_tactic.push_back(
                TacticScore{tactic.shortname, aggregate_scores(group, consts), group.size()});
        }
    }

    card.total = aggregate_scores(scores, consts);

    std::vector<std::string_view> unique;
    for (const auto& r : results) unique.push_back(r.technique_id);
    std::sort(unique.begin(), unique.end());
    card.tested_techniques =
        static_cast<std::size_t>(std::unique(unique.begin(), unique.end()) - unique.begin());
    card.catalog_techniques = catalog.stats().total;
    card.coverage_percent = coverage(card.tested_techniques, card.catalog_techniques);
    card.verdict = verdict(card.total, consts);
    return card;
}

}  // namespace

std::string generate_assessment_id()
{
    std::random_device rd;
    std::mt19937_64 gen((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(gen()),
                  static_cast<unsigned long long>(gen()));
    return buf;
}

bool is_assessment_id(std::string_view id)
{
    if (id.empty() || id.size() > 64 || id.front() == '.') return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    });
}

Assessment new_assessment(std::string target_name, Timestamp created_at, std::string id)
{
    if (!is_assessment_id(id)) {
        throw Error(ErrorCode::InvalidArgument, "invalid assessment id '" + id + "'", "id");
    }
    return Assessment{std::move(id), std::move(target_name), created_at, {}};
}

void validate_execution(std::string_view technique_id, std::string_view tactic,
                        const LabeledCatalog& catalog)
{
    const auto* lt = catalog.find(technique_id);
    if (lt == nullptr) {
        throw Error(ErrorCode::NotInCatalog,
                    "technique " + std::string(technique_id) + " not in catalog", "technique_id");
    }
    const auto& refs = lt->technique.tactic_refs;
    if (std::find(refs.begin(), refs.end(), tactic) == refs.end()) {
        throw Error(ErrorCode::TacticMismatch,
                    "technique " + std::string(technique_id) + " not mapped to tactic " +
                        std::string(tactic),
                    "tactic");
    }
}

Assessment record(Assessment assessment, TechniqueExecution execution,
                  const LabeledCatalog& catalog)
{
    validate_execution(execution.technique_id, execution.tactic, catalog);
    if (!assessment.executions.empty() &&
        execution.observed_at < assessment.executions.back().observed_at) {
        throw Error(ErrorCode::OutOfOrder,
                    "observed_at " + format_utc(execution.observed_at) +
                        " precedes the previous execution",
                    "observed_at");
    }
    assessment.executions.push_back(std::move(execution));
    return assessment;
}

std::vector<EffectiveResult> effective_results(const Assessment& assessment)
{
    std::vector<EffectiveResult> out;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& e : assessment.executions) {
        auto [it, inserted] = slot.try_emplace(result_key(e.technique_id, e.tactic), out.size());
        if (inserted) {
            out.push_back({e.technique_id, e.tactic, e.status});
        } else {
            out[it->second].status = e.status;
        }
    }
    return out;
}

Scorecard compute_scorecard(const Assessment& assessment, const LabeledCatalog& catalog,
                            const ScoringConstants& consts)
{
    return score_results(assessment, effective_results(assessment), catalog, consts);
}

Scorecard what_if(const Assessment& assessment, std::span<const ResultOverride> overrides,
                  const LabeledCatalog& catalog, const ScoringConstants& consts)
{
    auto results = effective_results(assessment);
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t k = 0; k < results.size(); ++k) {
        slot.emplace(result_key(results[k].technique_id, results[k].tactic), k);
    }
    for (const auto& o : overrides) {
        validate_execution(o.technique_id, o.tactic, catalog);
        auto [it, inserted] = slot.try_emplace(result_key(o.technique_id, o.tactic), results.size());
        if (inserted) {
            results.push_back({o.technique_id, o.tactic, o.status});
        } else {
            results[it->second].status = o.status;
        }
    }
    return score_results(assessment, results, catalog, consts);
}

}  // namespace attackscore
