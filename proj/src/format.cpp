#include "thirdq/format.hpp"

#include <cstdio>

namespace thirdq {

std::string fmt_num(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace thirdq
