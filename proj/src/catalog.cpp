#include "attackscore/catalog.hpp"

#include <algorithm>
#include <cctype>

#include "attackscore/error.hpp"

namespace attackscore {

namespace {

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
    });
}

}  // namespace

std::string_view to_string(LabelSource source)
{
    return source == LabelSource::Curated ? "curated" : "default";
}

bool is_technique_id(std::string_view id)
{
    if (id.size() < 5 || id[0] != 'T' || !all_digits(id.substr(1, 4))) return false;
    if (id.size() == 5) return true;
    return id.size() == 9 && id[5] == '.' && all_digits(id.substr(6, 3));
}

bool is_tactic_id(std::string_view id)
{
    return id.size() == 6 && id.substr(0, 2) == "TA" && all_digits(id.substr(2));
}

const LabeledTechnique* LabeledCatalog::find(std::string_view technique_id) const
{
    auto it = by_id_.find(std::string(technique_id));
    return it == by_id_.end() ? nullptr : &techniques_[it->second];
}

const Tactic* LabeledCatalog::find_tactic(std::string_view shortname) const
{
    auto it = std::find_if(tactics_.begin(), tactics_.end(),
                           [&](const Tactic& t) { return t.shortname == shortname; });
    return it == tactics_.end() ? nullptr : &*it;
}

std::vector<TechniqueLabel> LabeledCatalog::labels() const
{
    std::vector<TechniqueLabel> out;
    out.reserve(techniques_.size());
    for (const auto& lt : techniques_) out.push_back(lt.label);
    return out;
}

LabeledCatalog resolve(const Catalog& catalog, std::span<const TechniqueLabel> labels,
                       DefaultLabelPolicy policy)
{
    LabeledCatalog lc;
    lc.tactics_ = catalog.tactics;

    std::unordered_map<std::string, const TechniqueLabel*> by_label;
    for (const auto& label : labels) by_label[label.technique_id] = &label;

    lc.techniques_.reserve(catalog.techniques.size());
    for (const auto& t : catalog.techniques) {
        if (t.revoked_or_deprecated) {
            ++lc.stats_.excluded;
            continue;
        }
        LabeledTechnique lt{t, {}};
        if (auto it = by_label.find(t.id); it != by_label.end()) {
            lt.label = *it->second;
        } else {
            lt.label = TechniqueLabel{t.id, policy.impact, policy.exploitability,
                                      "no curated label", LabelSource::Default};
        }
        if (lt.label.source == LabelSource::Curated) {
            ++lc.stats_.labeled;
        } else {
            ++lc.stats_.defaulted;
        }
        lc.techniques_.push_back(std::move(lt));
    }
    std::sort(lc.techniques_.begin(), lc.techniques_.end(),
              [](const LabeledTechnique& a, const LabeledTechnique& b) {
                  return a.technique.id < b.technique.id;
              });
    for (std::size_t k = 0; k < lc.techniques_.size(); ++k) {
        lc.by_id_.emplace(lc.techniques_[k].technique.id, k);
    }
    lc.stats_.total = lc.techniques_.size();
    lc.stats_.excluded += catalog.excluded;

    for (const auto& [id, label] : by_label) {
        if (!lc.by_id_.contains(id)) {
            lc.diagnostics_.push_back("unknown technique " + id + " in label set");
        }
    }
    std::sort(lc.diagnostics_.begin(), lc.diagnostics_.end());
    return lc;
}

std::vector<LabeledTechnique> techniques_in_tactic(const LabeledCatalog& catalog,
                                                   std::string_view tactic_shortname)
{
    if (catalog.find_tactic(tactic_shortname) == nullptr) {
        std::string valid;
        for (const auto& t : catalog.tactics()) {
            if (!valid.empty()) valid += ", ";
            valid += t.shortname;
        }
        throw Error(ErrorCode::UnknownTactic,
                    "unknown tactic '" + std::string(tactic_shortname) + "'; valid: " + valid,
                    "tactic");
    }
    std::vector<LabeledTechnique> out;
    for (const auto& lt : catalog.techniques()) {
        const auto& refs = lt.technique.tactic_refs;
        if (std::find(refs.begin(), refs.end(), tactic_shortname) != refs.end()) {
            out.push_back(lt);
        }
    }
    return out;
}

}  // namespace attackscore
