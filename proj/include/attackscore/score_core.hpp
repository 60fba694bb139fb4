#pragma once

// Protection-score mathematics: severity weights, the cubic exploitability and
// impact components, per-technique scores, category banding, weighted
// aggregation and matrix coverage. Everything here is pure.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace attackscore {

enum class SeverityLevel { Low, Medium, High };
enum class Status { Success, Failure };
enum class ProtectionCategory { VeryLow, Low, Medium, High, VeryHigh };

inline constexpr std::array kSeverityLevels{SeverityLevel::Low, SeverityLevel::Medium,
                                            SeverityLevel::High};
inline constexpr std::array kStatuses{Status::Success, Status::Failure};
inline constexpr std::array kCategories{ProtectionCategory::VeryLow, ProtectionCategory::Low,
                                        ProtectionCategory::Medium, ProtectionCategory::High,
                                        ProtectionCategory::VeryHigh};

std::string_view to_string(SeverityLevel level);   // "Low" | "Medium" | "High"
std::string_view to_string(Status status);         // "success" | "failure"
std::string_view to_string(ProtectionCategory c);  // "very_low" ... "very_high"
std::string_view display_name(ProtectionCategory c);

// Case-insensitive "low|medium|high".
std::optional<SeverityLevel> parse_severity(std::string_view token);
// Case-insensitive "success|failure".
std::optional<Status> parse_status(std::string_view token);
std::optional<ProtectionCategory> parse_category(std::string_view token);

struct SeverityWeight {
    double value = 0.0;
    friend bool operator==(SeverityWeight, SeverityWeight) = default;
};

struct ProtectionScore {
    double raw = 0.0;      // unclamped
    double percent = 0.0;  // clamped to [0, 100]

    static ProtectionScore from_raw(double raw);
    friend bool operator==(const ProtectionScore&, const ProtectionScore&) = default;
};

// Parameters of the scoring model. Default construction yields the published
// values; setters validate and throw Error(InvalidArgument).
class ScoringConstants {
public:
    ScoringConstants();

    double adjustment() const noexcept { return adjustment_; }
    SeverityWeight severity_weight(SeverityLevel level, Status status) const noexcept;
    double category_weight(ProtectionCategory c) const noexcept;
    // Lower edges of Low, Medium, High, VeryHigh. VeryLow starts at 0 and
    // VeryHigh is closed at 100.
    const std::array<double, 4>& band_edges() const noexcept { return band_edges_; }

    void set_adjustment(double a);
    void set_severity_weight(SeverityLevel level, Status status, double value);
    void set_category_weight(ProtectionCategory c, double weight);
    void set_band_edges(const std::array<double, 4>& edges);

    // Stable 64-bit FNV-1a digest of every parameter, as 16 hex digits.
    std::string fingerprint() const;

    friend bool operator==(const ScoringConstants&, const ScoringConstants&) = default;

private:
    double adjustment_;
    std::array<std::array<double, 2>, 3> severity_weights_;  // [level][status]
    std::array<double, 5> category_weights_;
    std::array<double, 4> band_edges_;
};

const ScoringConstants& default_constants();

SeverityWeight severity_weight(SeverityLevel level, Status status,
                               const ScoringConstants& consts = default_constants());

// ((e/a) - 5)^3 + 50
double exploitability_component(SeverityWeight e, const ScoringConstants& consts);
// -((i/a) - 5)^3 + 50
double impact_component(SeverityWeight i, const ScoringConstants& consts);

ProtectionScore protection_score_from_weights(SeverityWeight e, SeverityWeight i,
                                              const ScoringConstants& consts);

// The status selects the weight row for both exploitability and impact.
ProtectionScore protection_score(SeverityLevel exploitability, SeverityLevel impact,
                                 Status status, const ScoringConstants& consts);

ProtectionCategory protection_category(double percent, const ScoringConstants& consts);
inline ProtectionCategory protection_category(const ProtectionScore& s,
                                              const ScoringConstants& consts)
{
    return protection_category(s.percent, consts);
}

// Category-weighted arithmetic mean of the clamped percents. Throws
// Error(NoResults) on empty input.
ProtectionScore aggregate_scores(std::span<const ProtectionScore> scores,
                                 const ScoringConstants& consts);

// Percent of the catalog exercised. Throws Error(EmptyCatalog) when the
// catalog is empty and Error(InvalidArgument) when tested exceeds it.
double coverage(std::size_t tested_unique_techniques, std::size_t catalog_techniques);

// Round half away from zero to an integer percent.
long display_percent(double percent);

}  // namespace attackscore
