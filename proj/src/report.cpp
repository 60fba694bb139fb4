#include "attackscore/report.hpp"

#include <cstdio>

#include "attackscore/error.hpp"

namespace attackscore {

namespace {

using json = nlohmann::ordered_json;

std::string pad(std::string_view s, std::size_t width)
{
    std::string out(s.substr(0, width));
    if (s.size() > width && width > 3) out.replace(width - 3, 3, "...");
    out.resize(width, ' ');
    return out;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const json& field(const json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::Schema, "missing field " + path + key, path + key);
    }
    return *it;
}

template <typename T>
T get(const json& obj, const char* key, const std::string& path = {})
{
    try {
        return field(obj, key, path).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::Schema, "wrong type for field " + path + key, path + key);
    }
}

template <typename Enum, typename Parser>
Enum get_enum(const json& obj, const char* key, const std::string& path, Parser parse)
{
    auto parsed = parse(get<std::string>(obj, key, path));
    if (!parsed) {
        throw Error(ErrorCode::Schema, "invalid value for field " + path + key, path + key);
    }
    return *parsed;
}

std::optional<LabelSource> parse_label_source(std::string_view s)
{
    if (s == "curated") return LabelSource::Curated;
    if (s == "default") return LabelSource::Default;
    return std::nullopt;
}

}  // namespace

std::string_view verdict_message(ProtectionCategory band)
{
    switch (band) {
    case ProtectionCategory::VeryLow:
        return "Critical exposure. Most simulated techniques got through; start remediation now.";
    case ProtectionCategory::Low:
        return "Security is weak. Significant gaps remain; prioritize hardening.";
    case ProtectionCategory::Medium:
        return "Security alright. But, put your security guys to work right now.";
    case ProtectionCategory::High:
        return "Security is good. Keep testing to stay ahead.";
    case ProtectionCategory::VeryHigh:
        return "Security is excellent. Defenses held against the simulated techniques.";
    }
    return "";
}

Verdict verdict(const ProtectionScore& total, const ScoringConstants& consts)
{
    const auto band = protection_category(total, consts);
    return Verdict{band, std::string(verdict_message(band))};
}

std::string render_text(const Scorecard& card)
{
    std::string out;
    char line[256];

    out += "Protection Scorecard\n";
    out += "Target:     " + card.target_name + " (" + card.assessment_id + ")\n";
    out += "As of:      " + format_utc(card.computed_at) + "\n";
    out += "Constants:  a=" + format_number(card.adjustment) +
           " fingerprint=" + card.constants_fingerprint + "\n\n";

    out += pad("ID", 11) + " " + pad("Name", 36) + " " + pad("Tactic", 21) + " " + pad("E", 7) +
           " " + pad("I", 7) + " " + pad("Status", 8) + " Score\n";
    for (const auto& t : card.per_technique) {
        std::string name = t.name;
        if (t.label_source == LabelSource::Default) name += " *";
        std::snprintf(line, sizeof line, "%s %s %s %s %s %s %5ld\n", pad(t.technique_id, 11).c_str(),
                      pad(name, 36).c_str(), pad(t.tactic, 21).c_str(),
                      pad(to_string(t.exploitability), 7).c_str(),
                      pad(to_string(t.impact), 7).c_str(), pad(to_string(t.status), 8).c_str(),
                      display_percent(t.score.percent));
        out += line;
    }

    if (!card.per_tactic.empty()) {
        out += "\nPer tactic\n";
        for (const auto& t : card.per_tactic) {
            std::snprintf(line, sizeof line, "  %s %5ld  (%zu technique%s)\n",
                          pad(t.tactic, 21).c_str(), display_percent(t.score.percent),
                          t.techniques, t.techniques == 1 ? "" : "s");
            out += line;
        }
    }

    std::snprintf(line, sizeof line, "\nTotal Protection Score: %ld%% (%s)\n",
                  display_percent(card.total.percent),
                  std::string(display_name(card.verdict.band)).c_str());
    out += line;
    std::snprintf(line, sizeof line, "Coverage: %ld%% (%zu of %zu techniques)\n",
                  display_percent(card.coverage_percent), card.tested_techniques,
                  card.catalog_techniques);
    out += line;
    out += "Verdict: " + card.verdict.message + "\n";

    bool any_default = false;
    for (const auto& t : card.per_technique) any_default |= t.label_source == LabelSource::Default;
    if (any_default) out += "* no curated label; default levels applied\n";
    return out;
}

json scorecard_to_json(const Scorecard& card)
{
    json doc;
    doc["schema"] = kScorecardSchema;
    doc["assessment_id"] = card.assessment_id;
    doc["target_name"] = card.target_name;
    doc["computed_at"] = format_utc(card.computed_at);
    doc["adjustment"] = card.adjustment;
    doc["constants_fingerprint"] = card.constants_fingerprint;

    doc["per_technique"] = json::array();
    for (const auto& t : card.per_technique) {
        doc["per_technique"].push_back({{"technique_id", t.technique_id},
                                        {"name", t.name},
                                        {"tactic", t.tactic},
                                        {"exploitability", to_string(t.exploitability)},
                                        {"impact", to_string(t.impact)},
                                        {"status", to_string(t.status)},
                                        {"label_source", to_string(t.label_source)},
                                        {"score_raw", t.score.raw},
                                        {"score_percent", t.score.percent},
                                        {"score_display", display_percent(t.score.percent)}});
    }

    doc["per_tactic"] = json::object();
    for (const auto& t : card.per_tactic) {
        doc["per_tactic"][t.tactic] = {{"score_raw", t.score.raw},
                                       {"score_percent", t.score.percent},
                                       {"score_display", display_percent(t.score.percent)},
                                       {"techniques", t.techniques}};
    }

    doc["total"] = card.total.percent;
    doc["total_raw"] = card.total.raw;
    doc["total_display"] = display_percent(card.total.percent);
    doc["coverage_percent"] = card.coverage_percent;
    doc["coverage_display"] = display_percent(card.coverage_percent);
    doc["tested_techniques"] = card.tested_techniques;
    doc["catalog_techniques"] = card.catalog_techniques;
    doc["verdict"] = {{"band", to_string(card.verdict.band)}, {"message", card.verdict.message}};
    return doc;
}

Scorecard scorecard_from_json(const json& doc)
{
    if (!doc.is_object()) {
        throw Error(ErrorCode::Schema, "scorecard document must be an object");
    }
    if (get<std::string>(doc, "schema") != kScorecardSchema) {
        throw Error(ErrorCode::Version,
                    "unsupported scorecard schema; supported: " + std::string(kScorecardSchema),
                    "schema");
    }

    Scorecard card;
    card.assessment_id = get<std::string>(doc, "assessment_id");
    card.target_name = get<std::string>(doc, "target_name");
    const auto computed = parse_utc(get<std::string>(doc, "computed_at"));
    if (!computed) throw Error(ErrorCode::Schema, "invalid computed_at", "computed_at");
    card.computed_at = *computed;
    card.adjustment = get<double>(doc, "adjustment");
    card.constants_fingerprint = get<std::string>(doc, "constants_fingerprint");

    const auto& techniques = field(doc, "per_technique", "");
    if (!techniques.is_array()) throw Error(ErrorCode::Schema, "per_technique must be an array");
    for (std::size_t k = 0; k < techniques.size(); ++k) {
        const auto path = "per_technique[" + std::to_string(k) + "].";
        const auto& t = techniques[k];
        TechniqueScore ts;
        ts.technique_id = get<std::string>(t, "technique_id", path);
        ts.name = get<std::string>(t, "name", path);
        ts.tactic = get<std::string>(t, "tactic", path);
        ts.exploitability = get_enum<SeverityLevel>(t, "exploitability", path, parse_severity);
        ts.impact = get_enum<SeverityLevel>(t, "impact", path, parse_severity);
        ts.status = get_enum<Status>(t, "status", path, parse_status);
        ts.label_source = get_enum<LabelSource>(t, "label_source", path, parse_label_source);
        ts.score = {get<double>(t, "score_raw", path), get<double>(t, "score_percent", path)};
        card.per_technique.push_back(std::move(ts));
    }

    const auto& tactics = field(doc, "per_tactic", "");
    if (!tactics.is_object()) throw Error(ErrorCode::Schema, "per_tactic must be an object");
    for (const auto& [name, t] : tactics.items()) {
        const auto path = "per_tactic." + name + ".";
        card.per_tactic.push_back(TacticScore{
            name,
            {get<double>(t, "score_raw", path), get<double>(t, "score_percent", path)},
            get<std::size_t>(t, "techniques", path)});
    }

    card.total = {get<double>(doc, "total_raw"), get<double>(doc, "total")};
    card.coverage_percent = get<double>(doc, "coverage_percent");
    card.tested_techniques = get<std::size_t>(doc, "tested_techniques");
    card.catalog_techniques = get<std::size_t>(doc, "catalog_techniques");
    const auto& v = field(doc, "verdict", "");
    card.verdict.band = get_enum<ProtectionCategory>(v, "band", "verdict.", parse_category);
    card.verdict.message = get<std::string>(v, "message", "verdict.");
    return card;
}

std::string render_structured(const Scorecard& card)
{
    return scorecard_to_json(card).dump(2) + "\n";
}

Scorecard parse_structured(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse,
                    "malformed scorecard at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return scorecard_from_json(doc);
}

std::string render_navigator_layer(const Scorecard& card, const LabeledCatalog& catalog,
                                   const LayerOptions& options)
{
    json layer;
    layer["name"] = options.name + ": " + card.target_name;
    layer["versions"] = {{"layer", options.layer_version},
                         {"navigator", options.navigator_version}};
    layer["domain"] = "enterprise-attack";
    layer["description"] = "Protection scores for assessment " + card.assessment_id + " as of " +
                           format_utc(card.computed_at);
    layer["sorting"] = 3;
    layer["hideDisabled"] = false;

    layer["techniques"] = json::array();
    for (const auto& t : card.per_technique) {
        const auto* lt = catalog.find(t.technique_id);
        std::string comment = std::string(to_string(t.status)) +
                              "; E=" + std::string(to_string(t.exploitability)) +
                              " I=" + std::string(to_string(t.impact));
        if (t.label_source == LabelSource::Default) comment += " (default label)";
        json entry = {{"techniqueID", t.technique_id},
                      {"tactic", t.tactic},
                      {"score", display_percent(t.score.percent)},
                      {"comment", comment},
                      {"enabled", true}};
        if (lt != nullptr && lt->technique.is_subtechnique) entry["showSubtechniques"] = false;
        layer["techniques"].push_back(std::move(entry));
    }

    layer["gradient"] = {{"colors", {"#ff6666ff", "#ffe766ff", "#8ec843ff"}},
                         {"minValue", 0},
                         {"maxValue", 100}};
    layer["legendItems"] = json::array();
    layer["metadata"] = json::array({
        {{"name", "total_protection_score"}, {"value", std::to_string(display_percent(card.total.percent))}},
        {{"name", "coverage_percent"}, {"value", std::to_string(display_percent(card.coverage_percent))}},
        {{"name", "constants_fingerprint"}, {"value", card.constants_fingerprint}},
    });
    return layer.dump(2) + "\n";
}

std::optional<OutputFormat> parse_output_format(std::string_view name)
{
    if (name == "text") return OutputFormat::Text;
    if (name == "structured" || name == "json") return OutputFormat::Structured;
    if (name == "layer") return OutputFormat::Layer;
    return std::nullopt;
}

std::string render(const Scorecard& card, const LabeledCatalog& catalog, OutputFormat format,
                   const LayerOptions& options)
{
    switch (format) {
    case OutputFormat::Text: return render_text(card);
    case OutputFormat::Structured: return render_structured(card);
    case OutputFormat::Layer: return render_navigator_layer(card, catalog, options);
    }
    return {};
}

}  // namespace attackscore
