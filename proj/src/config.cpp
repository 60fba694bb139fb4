#include "attackscore/config.hpp"

#include <charconv>
#include <tuple>

#include <nlohmann/json.hpp>

#include "attackscore/error.hpp"
#include "attackscore/io.hpp"

namespace attackscore {

namespace {

using nlohmann::json;

double parse_double(std::string_view text, std::string_view what)
{
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "invalid number '" + std::string(text) + "' in " + std::string(what));
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
    return parts;
}

double number(const json& v, const std::string& field)
{
    if (!v.is_number()) {
        throw Error(ErrorCode::Schema, "config field " + field + " must be a number", field);
    }
    return v.get<double>();
}

}  // namespace

void ConstantsOverrides::merge(const ConstantsOverrides& later)
{
    if (later.adjustment) adjustment = later.adjustment;
    if (later.band_edges) band_edges = later.band_edges;
    category_weights.insert(category_weights.end(), later.category_weights.begin(),
                            later.category_weights.end());
    severity_weights.insert(severity_weights.end(), later.severity_weights.begin(),
                            later.severity_weights.end());
}

ScoringConstants ConstantsOverrides::apply(ScoringConstants base) const
{
    if (adjustment) base.set_adjustment(*adjustment);
    if (band_edges) base.set_band_edges(*band_edges);
    for (const auto& [c, w] : category_weights) base.set_category_weight(c, w);
    for (const auto& [level, status, w] : severity_weights) base.set_severity_weight(level, status, w);
    return base;
}

std::array<double, 4> parse_band_edges(std::string_view text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 4) {
        throw Error(ErrorCode::InvalidArgument, "band edges need exactly four comma-separated values");
    }
    std::array<double, 4> edges{};
    for (std::size_t k = 0; k < 4; ++k) edges[k] = parse_double(parts[k], "band edges");
    return edges;
}

std::vector<std::pair<ProtectionCategory, double>> parse_category_weights(std::string_view text)
{
    std::vector<std::pair<ProtectionCategory, double>> out;
    for (auto item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument,
                        "category weight '" + std::string(item) + "' must look like name=value");
        }
        auto category = parse_category(item.substr(0, eq));
        if (!category) {
            throw Error(ErrorCode::InvalidArgument,
                        "unknown protection category '" + std::string(item.substr(0, eq)) + "'");
        }
        out.emplace_back(*category, parse_double(item.substr(eq + 1), "category weights"));
    }
    return out;
}

FileConfig load_config_file(const std::filesystem::path& path)
{
    const auto text = io::read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse,
                    "malformed config at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::Schema, "config must be a JSON object");

    FileConfig cfg;
    const auto base = path.parent_path();
    auto resolve_path = [&](const char* key) -> std::optional<std::filesystem::path> {
        auto it = doc.find(key);
        if (it == doc.end()) return std::nullopt;
        if (!it->is_string()) throw Error(ErrorCode::Schema, std::string(key) + " must be a string", key);
        std::filesystem::path p = it->get<std::string>();
        return p.is_relative() ? base / p : p;
    };
    cfg.catalog = resolve_path("catalog");
    cfg.labels = resolve_path("labels");

    auto c = doc.find("constants");
    if (c == doc.end()) return cfg;
    if (!c->is_object()) throw Error(ErrorCode::Schema, "constants must be an object", "constants");

    if (auto a = c->find("a"); a != c->end()) cfg.constants.adjustment = number(*a, "constants.a");
    if (auto b = c->find("band_edges"); b != c->end()) {
        if (!b->is_array() || b->size() != 4) {
            throw Error(ErrorCode::Schema, "constants.band_edges must hold four numbers",
                        "constants.band_edges");
        }
        std::array<double, 4> edges{};
        for (std::size_t k = 0; k < 4; ++k) edges[k] = number((*b)[k], "constants.band_edges");
        cfg.constants.band_edges = edges;
    }
    if (auto w = c->find("category_weights"); w != c->end()) {
        if (!w->is_object()) {
            throw Error(ErrorCode::Schema, "constants.category_weights must be an object",
                        "constants.category_weights");
        }
        for (const auto& [name, value] : w->items()) {
            const auto field = "constants.category_weights." + name;
            auto category = parse_category(name);
            if (!category) throw Error(ErrorCode::Schema, "unknown category " + name, field);
            cfg.constants.category_weights.emplace_back(*category, number(value, field));
        }
    }
    if (auto s = c->find("severity_weights"); s != c->end()) {
        if (!s->is_object()) {
            throw Error(ErrorCode::Schema, "constants.severity_weights must be an object",
                        "constants.severity_weights");
        }
        for (const auto& [level_name, row] : s->items()) {
            const auto field = "constants.severity_weights." + level_name;
            auto level = parse_severity(level_name);
            if (!level || !row.is_object()) {
                throw Error(ErrorCode::Schema, "invalid severity row " + level_name, field);
            }
            for (const auto& [status_name, value] : row.items()) {
                auto status = parse_status(status_name);
                if (!status) throw Error(ErrorCode::Schema, "unknown status " + status_name, field);
                cfg.constants.severity_weights.emplace_back(*level, *status,
                                                            number(value, field + "." + status_name));
            }
        }
    }
    return cfg;
}

}  // namespace attackscore
