#pragma once

#include <string>

namespace remmpc {
namespace log {

enum class Level { Off = 0, Info = 1, Debug = 2 };

/// Verbosity from the REMMPC_LOG environment variable (off|info|debug),
/// read once per process.
Level level();

void info(const std::string& msg);
void debug(const std::string& msg);

}  // namespace log
}  // namespace remmpc
