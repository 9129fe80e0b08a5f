#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace taglex {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Source of event timestamps; injectable so tests and replays are reproducible.
using Clock = std::function<Timestamp()>;

Timestamp system_now();
Clock system_clock();

/// "2026-10-15T08:30:00.000Z"
std::string format_rfc3339(Timestamp ts);

/// Accepts the "Z" form with optional fractional seconds (truncated to ms).
std::optional<Timestamp> parse_rfc3339(std::string_view text);

}  // namespace taglex
