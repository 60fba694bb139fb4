#include "attackscore/assessment_io.hpp"

#include <nlohmann/json.hpp>

#include "attackscore/error.hpp"
#include "attackscore/hash.hpp"
#include "attackscore/io.hpp"

namespace attackscore {

namespace {

using json = nlohmann::ordered_json;

const json& require(const json& obj, const char* key, json::value_t type, const std::string& path)
{
    const auto field = path.empty() ? std::string(key) : path + "." + key;
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::Schema, "missing field " + field, field);
    }
    const bool ok = type == json::value_t::number_integer ? it->is_number_integer()
                                                          : it->type() == type;
    if (!ok) {
        throw Error(ErrorCode::Schema, "wrong type for field " + field, field);
    }
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path)
{
    return require(obj, key, json::value_t::string, path).get<std::string>();
}

Timestamp require_time(const json& obj, const char* key, const std::string& path)
{
    const auto text = require_string(obj, key, path);
    auto t = parse_utc(text);
    if (!t) {
        const auto field = path.empty() ? std::string(key) : path + "." + key;
        throw Error(ErrorCode::Schema,
                    "field " + field + " is not a UTC timestamp (YYYY-MM-DDTHH:MM:SSZ)", field);
    }
    return *t;
}

}  // namespace

std::string save_assessment(const Assessment& a)
{
    json doc;
    doc["version"] = kAssessmentVersion;
    doc["id"] = a.id;
    doc["target_name"] = a.target_name;
    doc["created_at"] = format_utc(a.created_at);
    doc["executions"] = json::array();
    for (const auto& e : a.executions) {
        doc["executions"].push_back({{"technique_id", e.technique_id},
                                     {"tactic", e.tactic},
                                     {"status", to_string(e.status)},
                                     {"observed_at", format_utc(e.observed_at)},
                                     {"note", e.note}});
    }
    return doc.dump(2) + "\n";
}

Assessment load_assessment(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse,
                    "malformed assessment at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::Schema, "assessment document must be an object");
    }
    const auto version = require(doc, "version", json::value_t::number_integer, "").get<long>();
    if (version != kAssessmentVersion) {
        throw Error(ErrorCode::Version,
                    "unsupported assessment version " + std::to_string(version) +
                        "; supported: " + std::to_string(kAssessmentVersion),
                    "version");
    }

    Assessment a;
    a.id = require_string(doc, "id", "");
    if (!is_assessment_id(a.id)) {
        throw Error(ErrorCode::Schema, "invalid assessment id '" + a.id + "'", "id");
    }
    a.target_name = require_string(doc, "target_name", "");
    a.created_at = require_time(doc, "created_at", "");

    const auto& executions = require(doc, "executions", json::value_t::array, "");
    for (std::size_t k = 0; k < executions.size(); ++k) {
        const auto path = "executions[" + std::to_string(k) + "]";
        const auto& e = executions[k];
        if (!e.is_object()) {
            throw Error(ErrorCode::Schema, path + " must be an object", path);
        }
        TechniqueExecution ex;
        ex.technique_id = require_string(e, "technique_id", path);
        if (!is_technique_id(ex.technique_id)) {
            throw Error(ErrorCode::Schema, "malformed technique id in " + path,
                        path + ".technique_id");
        }
        ex.tactic = require_string(e, "tactic", path);
        const auto status = require_string(e, "status", path);
        auto parsed = parse_status(status);
        if (!parsed) {
            throw Error(ErrorCode::Schema,
                        path + ".status must be success or failure, got '" + status + "'",
                        path + ".status");
        }
        ex.status = *parsed;
        ex.observed_at = require_time(e, "observed_at", path);
        if (auto note = e.find("note"); note != e.end()) {
            if (!note->is_string()) {
                throw Error(ErrorCode::Schema, "wrong type for field " + path + ".note",
                            path + ".note");
            }
            ex.note = note->get<std::string>();
        }
        if (!a.executions.empty() && ex.observed_at < a.executions.back().observed_at) {
            throw Error(ErrorCode::Schema, path + ".observed_at precedes the previous execution",
                        path + ".observed_at");
        }
        a.executions.push_back(std::move(ex));
    }
    return a;
}

Assessment read_assessment(const std::filesystem::path& path)
{
    return load_assessment(io::read_file(path));
}

void write_assessment(const std::filesystem::path& path, const Assessment& assessment)
{
    io::write_file_atomic(path, save_assessment(assessment));
}

std::string assessment_fingerprint(const Assessment& assessment)
{
    return fnv1a_hex(save_assessment(assessment));
}

}  // namespace attackscore
