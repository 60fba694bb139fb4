#pragma once

// HTTP adapter over the catalog, assessment and report operations.
//
//   GET  /healthz
//   GET  /catalog/tactics
//   GET  /catalog/techniques[?tactic=<shortname>]
//   POST /assessments                       {"target_name", "id"?, "created_at"?}
//   GET  /assessments/{id}
//   POST /assessments/{id}/results          {"technique_id", "tactic", "status", "observed_at"?, "note"?}
//   GET  /assessments/{id}/scorecard[?format=text|structured|layer]
//   POST /assessments/{id}/what-if          {"overrides": [{"technique_id", "tactic", "status"}]}
//
// Errors are {"error": {"code", "message", "field"?}} with a code from
// api_error_codes(). Every response carries the X-Constants-Fingerprint header.

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "attackscore/catalog.hpp"
#include "attackscore/error.hpp"
#include "attackscore/report.hpp"
#include "attackscore/score_core.hpp"

namespace attackscore {

struct ApiError {
    int status = 500;
    std::string code;
    std::string message;
    std::string field;
};

// bad_request, validation, not_found, unknown_tactic, unknown_assessment,
// already_exists, no_results, locked, internal
const std::vector<std::string_view>& api_error_codes();

// Maps a domain error onto the HTTP error the service reports for it.
ApiError to_api_error(const Error& error);

struct ServiceOptions {
    std::filesystem::path data_dir;  // one "<id>.assessment" file per assessment
    LayerOptions layer;
};

class ApiService {
public:
    ApiService(LabeledCatalog catalog, ScoringConstants consts, ServiceOptions options);
    ~ApiService();
    ApiService(const ApiService&) = delete;
    ApiService& operator=(const ApiService&) = delete;

    // Binds the listening socket; port 0 picks a free port. Returns the bound
    // port. Throws Error(Io) when binding fails.
    int bind(const std::string& host, int port);
    // Serves on the bound socket until stop(). Blocks.
    void run();
    void stop();

    std::filesystem::path assessment_path(std::string_view id) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace attackscore
