#pragma once

#include <cstdio>
#include <string>

namespace signlab {

// Shared float formatting for CSV/JSON emitters: 12 significant digits,
// locale-independent.
inline std::string fmt_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace signlab
