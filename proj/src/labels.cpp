#include "attackscore/labels.hpp"

#include <unordered_map>

#include "attackscore/error.hpp"
#include "attackscore/io.hpp"

namespace attackscore {

namespace {

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split_tabs(std::string_view line, std::size_t max_fields)
{
    std::vector<std::string_view> fields;
    while (fields.size() + 1 < max_fields) {
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) break;
        fields.push_back(line.substr(0, tab));
        line.remove_prefix(tab + 1);
    }
    fields.push_back(line);
    return fields;
}

}  // namespace

LabelParseResult parse_labels(std::string_view document)
{
    LabelParseResult result;
    std::unordered_map<std::string, std::size_t> seen;
    std::size_t line_no = 0;

    while (!document.empty()) {
        const auto nl = document.find('\n');
        auto line = document.substr(0, nl);
        document.remove_prefix(nl == std::string_view::npos ? document.size() : nl + 1);
        ++line_no;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || trim(line).front() == '#') continue;

        const auto where = "line " + std::to_string(line_no);
        const auto fields = split_tabs(line, 4);
        if (fields.size() < 3) {
            throw Error(ErrorCode::Schema,
                        where + ": expected technique_id, impact, exploitability separated by tabs",
                        where);
        }
        const std::string id(trim(fields[0]));
        if (!is_technique_id(id)) {
            throw Error(ErrorCode::MalformedId, where + ": malformed technique id '" + id + "'",
                        where);
        }
        const auto impact = parse_severity(trim(fields[1]));
        const auto exploitability = parse_severity(trim(fields[2]));
        if (!impact || !exploitability) {
            const auto bad = impact ? fields[2] : fields[1];
            throw Error(ErrorCode::UnknownSeverity,
                        where + ": unknown severity '" + std::string(trim(bad)) +
                            "' (expected low, medium or high)",
                        where);
        }

        TechniqueLabel label{id, *impact, *exploitability,
                             fields.size() > 3 ? std::string(trim(fields[3])) : std::string{},
                             LabelSource::Curated};
        if (auto it = seen.find(id); it != seen.end()) {
            result.diagnostics.push_back(where + ": duplicate label for " + id +
                                         "; the last one wins");
            result.labels[it->second] = std::move(label);
        } else {
            seen.emplace(id, result.labels.size());
            result.labels.push_back(std::move(label));
        }
    }
    return result;
}

LabelParseResult load_labels(const std::filesystem::path& path)
{
    return parse_labels(io::read_file(path));
}

}  // namespace attackscore
