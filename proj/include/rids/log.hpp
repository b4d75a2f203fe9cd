#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace rids {

// Verbosity from RIDS_LOG: quiet|info|debug (or 0|1|2). Default info.
inline int log_verbosity() {
  static const int v = [] {
    const char* e = std::getenv("RIDS_LOG");
    if (!e) return 1;
    std::string s = e;
    if (s == "quiet" || s == "0") return 0;
    if (s == "debug" || s == "2") return 2;
    return 1;
  }();
  return v;
}

inline void log_info(const std::string& msg) {
  if (log_verbosity() >= 1) std::fprintf(stderr, "[rids] %s\n", msg.c_str());
}

inline void log_debug(const std::string& msg) {
  if (log_verbosity() >= 2) std::fprintf(stderr, "[rids] %s\n", msg.c_str());
}

}  // namespace rids
