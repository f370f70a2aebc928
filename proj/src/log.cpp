#include "efl/log.hpp"

#include <cstdlib>
#include <iostream>

namespace efl::log {

Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("EFL_LOG");
    if (!env) return Level::off;
    const std::string v(env);
    if (v == "debug") return Level::debug;
    if (v == "info") return Level::info;
    return Level::off;
  }();
  return lvl;
}

void info(const std::string& msg) {
  if (level() >= Level::info) std::cerr << "[efl] " << msg << "\n";
}

void debug(const std::string& msg) {
  if (level() >= Level::debug) std::cerr << "[efl:debug] " << msg << "\n";
}

}  // namespace efl::log
