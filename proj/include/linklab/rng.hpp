#pragma once

#include <cstdint>
#include <random>

namespace linklab {

/// Uniform double in [0,1) from the raw 64-bit stream. The standard
/// distributions are implementation defined; this mapping is portable.
inline double uniform01(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

inline double uniform(std::mt19937_64& g, double a, double b) {
    return a + (b - a) * uniform01(g);
}

}  // namespace linklab
