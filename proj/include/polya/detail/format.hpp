#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace polya::detail {

// Shortest decimal representation that round-trips to the same double.
// Used for all CSV output so reruns are byte-identical across platforms.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace polya::detail
