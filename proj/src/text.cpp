#include "fuzzyvis/text.hpp"

#include <cstdio>

namespace fuzzyvis {

std::string format_double(double value) {
  char buf[40];
  int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace fuzzyvis
