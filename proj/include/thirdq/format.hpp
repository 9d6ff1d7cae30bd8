#pragma once

#include <string>

namespace thirdq {

// x with 12 significant digits (printf "%.12g"); negative zero prints as "0".
std::string fmt_num(double x);

}  // namespace thirdq
