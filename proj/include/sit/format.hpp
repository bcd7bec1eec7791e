#pragma once

#include <cstdio>
#include <string>

namespace sit {

// Fixed 12-digit scientific rendering shared by every text emitter; byte
// identical across runs for identical inputs.
inline std::string format_e12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

}  // namespace sit
