#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace attackscore {

enum class ErrorCode {
    InvalidArgument,
    Parse,
    NotAttackBundle,
    UnknownSeverity,
    MalformedId,
    UnknownTactic,
    NotInCatalog,
    TacticMismatch,
    OutOfOrder,
    NoResults,
    EmptyCatalog,
    Schema,
    Version,
    Io,
    Locked,
};

std::string_view to_string(ErrorCode code);

// Domain failure. `field` names the offending document field or input line
// when one is known.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string field = {})
        : std::runtime_error(message), code_(code), field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

}  // namespace attackscore
