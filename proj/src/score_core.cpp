#include "attackscore/score_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "attackscore/error.hpp"
#include "attackscore/hash.hpp"
#include "attackscore/score_kernels.hpp"

namespace attackscore {

namespace {

bool iequals(std::string_view a, std::string_view b)
{
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) ==
               std::tolower(static_cast<unsigned char>(y));
    });
}

std::size_t index(SeverityLevel l) { return static_cast<std::size_t>(l); }
std::size_t index(Status s) { return static_cast<std::size_t>(s); }
std::size_t index(ProtectionCategory c) { return static_cast<std::size_t>(c); }

double cube_term(SeverityWeight w, double a)
{
    const double x = w.value / a - 5.0;
    return x * x * x;
}

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
    }
}

}  // namespace

std::string_view to_string(SeverityLevel level)
{
    switch (level) {
    case SeverityLevel::Low: return "Low";
    case SeverityLevel::Medium: return "Medium";
    case SeverityLevel::High: return "High";
    }
    return "?";
}

std::string_view to_string(Status status)
{
    return status == Status::Success ? "success" : "failure";
}

std::string_view to_string(ProtectionCategory c)
{
    switch (c) {
    case ProtectionCategory::VeryLow: return "very_low";
    case ProtectionCategory::Low: return "low";
    case ProtectionCategory::Medium: return "medium";
    case ProtectionCategory::High: return "high";
    case ProtectionCategory::VeryHigh: return "very_high";
    }
    return "?";
}

std::string_view display_name(ProtectionCategory c)
{
    switch (c) {
    case ProtectionCategory::VeryLow: return "Very Low";
    case ProtectionCategory::Low: return "Low";
    case ProtectionCategory::Medium: return "Medium";
    case ProtectionCategory::High: return "High";
    case ProtectionCategory::VeryHigh: return "Very High";
    }
    return "?";
}

std::optional<SeverityLevel> parse_severity(std::string_view token)
{
    for (auto level : kSeverityLevels) {
        if (iequals(token, to_string(level))) return level;
    }
    return std::nullopt;
}

std::optional<Status> parse_status(std::string_view token)
{
    for (auto s : kStatuses) {
        if (iequals(token, to_string(s))) return s;
    }
    return std::nullopt;
}

std::optional<ProtectionCategory> parse_category(std::string_view token)
{
    for (auto c : kCategories) {
        if (iequals(token, to_string(c))) return c;
    }
    return std::nullopt;
}

ProtectionScore ProtectionScore::from_raw(double raw)
{
    return ProtectionScore{raw, std::clamp(raw, 0.0, 100.0)};
}

ScoringConstants::ScoringConstants()
    : adjustment_(1.1),
      severity_weights_{{{1.0, 1.5}, {5.0, 5.5}, {9.0, 9.5}}},
      category_weights_{0.1, 0.2, 0.5, 0.8, 1.0},
      band_edges_{20.0, 40.0, 60.0, 80.0}
{
}

SeverityWeight ScoringConstants::severity_weight(SeverityLevel level, Status status) const noexcept
{
    return SeverityWeight{severity_weights_[index(level)][index(status)]};
}

double ScoringConstants::category_weight(ProtectionCategory c) const noexcept
{
    return category_weights_[index(c)];
}

void ScoringConstants::set_adjustment(double a)
{
    require_finite(a, "graph adjustment constant");
    if (a <= 0.0) {
        throw Error(ErrorCode::InvalidArgument, "graph adjustment constant must be > 0");
    }
    adjustment_ = a;
}

void ScoringConstants::set_severity_weight(SeverityLevel level, Status status, double value)
{
    require_finite(value, "severity weight");
    if (value < 0.0 || value > 10.0) {
        throw Error(ErrorCode::InvalidArgument, "severity weight must lie on the 0-10 scale");
    }
    severity_weights_[index(level)][index(status)] = value;
}

void ScoringConstants::set_category_weight(ProtectionCategory c, double weight)
{
    require_finite(weight, "category weight");
    if (weight <= 0.0 || weight > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "category weight must lie in (0, 1]");
    }
    category_weights_[index(c)] = weight;
}

void ScoringConstants::set_band_edges(const std::array<double, 4>& edges)
{
    double prev = 0.0;
    for (double e : edges) {
        require_finite(e, "band edge");
        if (e <= prev || e >= 100.0) {
            throw Error(ErrorCode::InvalidArgument,
                        "band edges must be strictly increasing inside (0, 100)");
        }
        prev = e;
    }
    band_edges_ = edges;
}

std::string ScoringConstants::fingerprint() const
{
    std::string canon;
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        canon += buf;
    };
    put(adjustment_);
    for (const auto& row : severity_weights_) {
        for (double v : row) put(v);
    }
    for (double v : category_weights_) put(v);
    for (double v : band_edges_) put(v);

    return fnv1a_hex(canon);
}

const ScoringConstants& default_constants()
{
    static const ScoringConstants defaults;
    return defaults;
}

SeverityWeight severity_weight(SeverityLevel level, Status status, const ScoringConstants& consts)
{
    return consts.severity_weight(level, status);
}

double exploitability_component(SeverityWeight e, const ScoringConstants& consts)
{
    return cube_term(e, consts.adjustment()) + 50.0;
}

double impact_component(SeverityWeight i, const ScoringConstants& consts)
{
    return -cube_term(i, consts.adjustment()) + 50.0;
}

ProtectionScore protection_score_from_weights(SeverityWeight e, SeverityWeight i,
                                              const ScoringConstants& consts)
{
    // Mean of the two components, written so that equal weights cancel exactly.
    const double a = consts.adjustment();
    const double raw = (cube_term(e, a) - cube_term(i, a) + 100.0) / 2.0;
    return ProtectionScore::from_raw(raw);
}

ProtectionScore protection_score(SeverityLevel exploitability, SeverityLevel impact,
                                 Status status, const ScoringConstants& consts)
{
    return protection_score_from_weights(consts.severity_weight(exploitability, status),
                                         consts.severity_weight(impact, status), consts);
}

ProtectionCategory protection_category(double percent, const ScoringConstants& consts)
{
    const auto& edges = consts.band_edges();
    std::size_t band = 0;
    while (band < edges.size() && percent >= edges[band]) ++band;
    return kCategories[band];
}

ProtectionScore aggregate_scores(std::span<const ProtectionScore> scores,
                                 const ScoringConstants& consts)
{
    if (scores.empty()) {
        throw Error(ErrorCode::NoResults, "no scored techniques");
    }
    const auto sum = kernels::weighted_sum(scores, consts);
    double mean = sum.weighted / sum.weights;

    // Keep the mean inside the input range despite rounding in the sums.
    const auto [lo, hi] = std::minmax_element(
        scores.begin(), scores.end(),
        [](const ProtectionScore& x, const ProtectionScore& y) { return x.percent < y.percent; });
    mean = std::clamp(mean, lo->percent, hi->percent);
    return ProtectionScore{mean, mean};
}

double coverage(std::size_t tested_unique_techniques, std::size_t catalog_techniques)
{
    if (catalog_techniques == 0) {
        throw Error(ErrorCode::EmptyCatalog, "empty catalog");
    }
    if (tested_unique_techniques > catalog_techniques) {
        throw Error(ErrorCode::InvalidArgument,
                    "tested technique count exceeds the catalog size");
    }
    return 100.0 * static_cast<double>(tested_unique_techniques) /
           static_cast<double>(catalog_techniques);
}

long display_percent(double percent)
{
    return std::lround(percent);
}

}  // namespace attackscore
