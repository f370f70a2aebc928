#pragma once

/// @file log.hpp
/// Stderr logging gated by the EFL_LOG environment variable:
/// unset/"off" silences, "info" prints progress lines, "debug" adds detail.

#include <string>

namespace efl::log {

enum class Level { off = 0, info = 1, debug = 2 };

/// Level parsed from EFL_LOG once per process.
Level level();

void info(const std::string& msg);
void debug(const std::string& msg);

}  // namespace efl::log
