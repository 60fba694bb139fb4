#pragma once

// Versioned JSON assessment documents.

#include <filesystem>
#include <string>
#include <string_view>

#include "attackscore/assessment.hpp"

namespace attackscore {

inline constexpr int kAssessmentVersion = 1;

std::string save_assessment(const Assessment& assessment);

// Throws Error(Parse) for malformed JSON, Error(Schema) naming the offending
// field, and Error(Version) listing the supported versions.
Assessment load_assessment(std::string_view document);

Assessment read_assessment(const std::filesystem::path& path);
void write_assessment(const std::filesystem::path& path, const Assessment& assessment);

// Digest of the saved form; equal assessments have equal fingerprints.
std::string assessment_fingerprint(const Assessment& assessment);

}  // namespace attackscore
