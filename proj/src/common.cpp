#include "pellab/common.hpp"

#include <cstdio>

namespace pellab {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace pellab
