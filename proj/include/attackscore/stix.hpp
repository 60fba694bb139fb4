#pragma once

#include <filesystem>
#include <string_view>

#include "attackscore/catalog.hpp"

namespace attackscore {

// Ingest a STIX 2.x ATT&CK bundle. Techniques come from attack-pattern objects
// carrying a "mitre-attack" external id; tactics from x-mitre-tactic objects
// (ordered by the x-mitre-matrix when present), or from the kill-chain phase
// names when the bundle has no tactic objects.
//
// Throws Error(Parse) with the byte offset for malformed JSON and
// Error(NotAttackBundle) when there are no attack-patterns.
Catalog parse_stix_bundle(std::string_view document);

Catalog load_stix_bundle(const std::filesystem::path& path);

}  // namespace attackscore
