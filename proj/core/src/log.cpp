#include "remmpc/log.hpp"

#include <cstdlib>
#include <iostream>

namespace remmpc {
namespace log {

Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("REMMPC_LOG");
    if (env == nullptr) return Level::Off;
    const std::string v(env);
    if (v == "debug") return Level::Debug;
    if (v == "info") return Level::Info;
    return Level::Off;
  }();
  return lvl;
}

void info(const std::string& msg) {
  if (level() >= Level::Info) std::cerr << "[remmpc] " << msg << "\n";
}

void debug(const std::string& msg) {
  if (level() >= Level::Debug) std::cerr << "[remmpc:debug] " << msg << "\n";
}

}  // namespace log
}  // namespace remmpc
