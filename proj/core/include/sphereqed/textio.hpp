#pragma once

#include <cstdio>
#include <string>

namespace sqed::textio {

/// %g formatting with a fixed number of significant digits ('.' decimal
/// separator, locale-independent output).
inline std::string format_sig(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

inline std::string format_int(long v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%ld", v);
    return buf;
}

}  // namespace sqed::textio
