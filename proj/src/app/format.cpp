#include "turbilink/app/format.hpp"

#include <charconv>
#include <cmath>

namespace turbilink::app {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_number(const ExtendedReal& v) {
    return v.is_infinite() ? "inf" : format_number(v.value());
}

}  // namespace turbilink::app
