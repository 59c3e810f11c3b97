#pragma once

#include <charconv>
#include <string>

namespace mvbandit {

// Shortest decimal string that round-trips the double; keeps every emitted
// file byte-deterministic across runs and thread counts.
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace mvbandit
