#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace heatcert {

/// Shortest decimal string that reads back to exactly the same double.
inline std::string shortest(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return {buf, end};
}

}  // namespace heatcert
