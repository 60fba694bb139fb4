#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace attackscore {

using Timestamp = std::chrono::sys_seconds;

Timestamp now_utc();

// "2024-03-01T12:00:00Z"
std::string format_utc(Timestamp t);

// Accepts "YYYY-MM-DDTHH:MM:SSZ" only.
std::optional<Timestamp> parse_utc(std::string_view text);

}  // namespace attackscore
