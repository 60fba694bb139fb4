#include "attackscore/error.hpp"

namespace attackscore {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::NotAttackBundle: return "not_attack_bundle";
    case ErrorCode::UnknownSeverity: return "unknown_severity";
    case ErrorCode::MalformedId: return "malformed_id";
    case ErrorCode::UnknownTactic: return "unknown_tactic";
    case ErrorCode::NotInCatalog: return "not_in_catalog";
    case ErrorCode::TacticMismatch: return "tactic_mismatch";
    case ErrorCode::OutOfOrder: return "out_of_order";
    case ErrorCode::NoResults: return "no_results";
    case ErrorCode::EmptyCatalog: return "empty_catalog";
    case ErrorCode::Schema: return "schema_error";
    case ErrorCode::Version: return "version_mismatch";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::Locked: return "locked";
    }
    return "unknown";
}

}  // namespace attackscore
