#pragma once

#include <string>

#include "turbilink/extended_real.hpp"

namespace turbilink::app {

// Shortest decimal text that parses back to the same double; "inf", "-inf"
// and "nan" for non-finite values.
std::string format_number(double v);
std::string format_number(const ExtendedReal& v);

}  // namespace turbilink::app
