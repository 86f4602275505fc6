// format.hpp — locale-independent shortest-round-trip number formatting
// for deterministic file output.

#pragma once

#include <charconv>
#include <string>

namespace entverify {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace entverify
