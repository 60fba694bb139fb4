#pragma once

// ATT&CK catalog model and its join with Impact/Exploitability labels.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "attackscore/score_core.hpp"

namespace attackscore {

struct Tactic {
    std::string id;         // "TA0002"; empty when derived from kill-chain phases only
    std::string shortname;  // "execution"
    std::string display_name;

    friend bool operator==(const Tactic&, const Tactic&) = default;
};

struct Technique {
    std::string id;  // "T1106" or "T1055.005"
    std::string name;
    std::vector<std::string> tactic_refs;  // tactic shortnames
    bool is_subtechnique = false;
    bool revoked_or_deprecated = false;

    friend bool operator==(const Technique&, const Technique&) = default;
};

enum class LabelSource { Curated, Default };
std::string_view to_string(LabelSource source);

struct TechniqueLabel {
    std::string technique_id;
    SeverityLevel impact = SeverityLevel::Medium;
    SeverityLevel exploitability = SeverityLevel::Medium;
    std::string rationale;
    LabelSource source = LabelSource::Curated;

    friend bool operator==(const TechniqueLabel&, const TechniqueLabel&) = default;
};

// Scoreable techniques of one ingested matrix. Revoked and deprecated
// attack-patterns are counted in `excluded` and not listed.
struct Catalog {
    std::vector<Tactic> tactics;
    std::vector<Technique> techniques;
    std::size_t excluded = 0;
    std::vector<std::string> diagnostics;
};

struct LabeledTechnique {
    Technique technique;
    TechniqueLabel label;

    friend bool operator==(const LabeledTechnique&, const LabeledTechnique&) = default;
};

struct CatalogStats {
    std::size_t total = 0;  // labeled + defaulted; the coverage denominator
    std::size_t labeled = 0;
    std::size_t defaulted = 0;
    std::size_t excluded = 0;

    friend bool operator==(const CatalogStats&, const CatalogStats&) = default;
};

struct DefaultLabelPolicy {
    SeverityLevel impact = SeverityLevel::Medium;
    SeverityLevel exploitability = SeverityLevel::Medium;
};

// Immutable after construction by resolve(); safe to share across threads.
class LabeledCatalog {
public:
    LabeledCatalog() = default;

    const std::vector<Tactic>& tactics() const noexcept { return tactics_; }
    // Sorted by technique id.
    std::span<const LabeledTechnique> techniques() const noexcept { return techniques_; }
    const CatalogStats& stats() const noexcept { return stats_; }
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

    const LabeledTechnique* find(std::string_view technique_id) const;
    const Tactic* find_tactic(std::string_view shortname) const;

    std::vector<TechniqueLabel> labels() const;

    friend bool operator==(const LabeledCatalog& a, const LabeledCatalog& b)
    {
        return a.tactics_ == b.tactics_ && a.techniques_ == b.techniques_ &&
               a.stats_ == b.stats_;
    }

private:
    friend LabeledCatalog resolve(const Catalog&, std::span<const TechniqueLabel>,
                                  DefaultLabelPolicy);

    std::vector<Tactic> tactics_;
    std::vector<LabeledTechnique> techniques_;
    std::unordered_map<std::string, std::size_t> by_id_;
    CatalogStats stats_;
    std::vector<std::string> diagnostics_;
};

// Attach labels to catalog techniques. Unlabeled techniques get the default
// policy's levels with source Default; labels for ids missing from the
// catalog are reported in diagnostics(). A label's own source is kept, so
// resolving a resolved catalog's labels() reproduces it.
LabeledCatalog resolve(const Catalog& catalog, std::span<const TechniqueLabel> labels,
                       DefaultLabelPolicy policy = {});

// Techniques mapped to the tactic. Throws Error(UnknownTactic) listing the
// valid shortnames.
std::vector<LabeledTechnique> techniques_in_tactic(const LabeledCatalog& catalog,
                                                   std::string_view tactic_shortname);

bool is_technique_id(std::string_view id);
bool is_tactic_id(std::string_view id);

}  // namespace attackscore
