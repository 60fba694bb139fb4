#include "attackscore/stix.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "attackscore/error.hpp"
#include "attackscore/io.hpp"

namespace attackscore {

namespace {

using nlohmann::json;

constexpr std::string_view kAttackSource = "mitre-attack";

std::string string_field(const json& obj, const char* key)
{
    auto it = obj.find(key);
    return it != obj.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

bool bool_field(const json& obj, const char* key)
{
    auto it = obj.find(key);
    return it != obj.end() && it->is_boolean() && it->get<bool>();
}

std::string attack_external_id(const json& obj)
{
    auto refs = obj.find("external_references");
    if (refs == obj.end() || !refs->is_array()) return {};
    for (const auto& ref : *refs) {
        if (ref.is_object() && string_field(ref, "source_name") == kAttackSource) {
            return string_field(ref, "external_id");
        }
    }
    return {};
}

std::vector<std::string> attack_phases(const json& obj)
{
    std::vector<std::string> phases;
    auto kc = obj.find("kill_chain_phases");
    if (kc == obj.end() || !kc->is_array()) return phases;
    for (const auto& phase : *kc) {
        if (!phase.is_object() || string_field(phase, "kill_chain_name") != kAttackSource) continue;
        auto name = string_field(phase, "phase_name");
        if (!name.empty() && std::find(phases.begin(), phases.end(), name) == phases.end()) {
            phases.push_back(std::move(name));
        }
    }
    return phases;
}

std::string title_case(std::string_view shortname)
{
    std::string out;
    bool start = true;
    for (char c : shortname) {
        if (c == '-') {
            out += ' ';
            start = true;
        } else {
            out += start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
            start = false;
        }
    }
    return out;
}

struct Candidate {
    Technique technique;
    std::string modified;
};

}  // namespace

Catalog parse_stix_bundle(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse,
                    "malformed bundle at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("objects") || !doc["objects"].is_array()) {
        throw Error(ErrorCode::NotAttackBundle, "not an ATT&CK bundle: no objects array");
    }

    Catalog catalog;
    std::vector<std::pair<std::string, Tactic>> tactic_objects;  // (stix id, tactic)
    std::vector<std::string> matrix_order;
    std::vector<Candidate> candidates;
    std::unordered_map<std::string, std::size_t> by_id;
    std::size_t attack_patterns = 0;

    for (const auto& obj : doc["objects"]) {
        if (!obj.is_object()) continue;
        const auto type = string_field(obj, "type");
        const bool retired = bool_field(obj, "revoked") || bool_field(obj, "x_mitre_deprecated");

        if (type == "attack-pattern") {
            ++attack_patterns;
            auto id = attack_external_id(obj);
            if (id.empty()) continue;  // not an ATT&CK technique
            if (retired) {
                ++catalog.excluded;
                continue;
            }
            if (!is_technique_id(id)) {
                catalog.diagnostics.push_back("skipping attack-pattern with malformed id " + id);
                ++catalog.excluded;
                continue;
            }
            Technique t;
            t.id = id;
            t.name = string_field(obj, "name");
            t.tactic_refs = attack_phases(obj);
            t.is_subtechnique = id.find('.') != std::string::npos;
            if (t.tactic_refs.empty()) {
                catalog.diagnostics.push_back(id + " has no mitre-attack kill-chain phase");
                ++catalog.excluded;
                continue;
            }
            Candidate c{std::move(t), string_field(obj, "modified")};
            if (auto it = by_id.find(c.technique.id); it != by_id.end()) {
                catalog.diagnostics.push_back("duplicate technique " + c.technique.id +
                                              "; keeping the latest modified");
                if (c.modified > candidates[it->second].modified) {
                    candidates[it->second] = std::move(c);
                }
                continue;
            }
            by_id.emplace(c.technique.id, candidates.size());
            candidates.push_back(std::move(c));
        } else if (type == "x-mitre-tactic" && !retired) {
            Tactic tactic{attack_external_id(obj), string_field(obj, "x_mitre_shortname"),
                          string_field(obj, "name")};
            if (!tactic.shortname.empty()) {
                tactic_objects.emplace_back(string_field(obj, "id"), std::move(tactic));
            }
        } else if (type == "x-mitre-matrix" && !retired && matrix_order.empty()) {
            if (auto refs = obj.find("tactic_refs"); refs != obj.end() && refs->is_array()) {
                for (const auto& r : *refs) {
                    if (r.is_string()) matrix_order.push_back(r.get<std::string>());
                }
            }
        }
    }

    if (attack_patterns == 0) {
        throw Error(ErrorCode::NotAttackBundle, "not an ATT&CK bundle: no attack-pattern objects");
    }

    if (!matrix_order.empty()) {
        auto rank = [&](const std::string& stix_id) {
            auto it = std::find(matrix_order.begin(), matrix_order.end(), stix_id);
            return static_cast<std::size_t>(it - matrix_order.begin());
        };
        std::stable_sort(tactic_objects.begin(), tactic_objects.end(),
                         [&](const auto& a, const auto& b) { return rank(a.first) < rank(b.first); });
    }
    std::unordered_set<std::string> known;
    for (auto& [stix_id, tactic] : tactic_objects) {
        if (known.insert(tactic.shortname).second) catalog.tactics.push_back(std::move(tactic));
    }

    const bool had_tactic_objects = !catalog.tactics.empty();
    for (const auto& c : candidates) {
        for (const auto& phase : c.technique.tactic_refs) {
            if (known.insert(phase).second) {
                if (had_tactic_objects) {
                    catalog.diagnostics.push_back("kill-chain phase " + phase +
                                                  " has no x-mitre-tactic object");
                }
                catalog.tactics.push_back(Tactic{{}, phase, title_case(phase)});
            }
        }
    }

    catalog.techniques.reserve(candidates.size());
    for (auto& c : candidates) catalog.techniques.push_back(std::move(c.technique));
    std::sort(catalog.techniques.begin(), catalog.techniques.end(),
              [](const Technique& a, const Technique& b) { return a.id < b.id; });
    return catalog;
}

Catalog load_stix_bundle(const std::filesystem::path& path)
{
    return parse_stix_bundle(io::read_file(path));
}

}  // namespace attackscore
