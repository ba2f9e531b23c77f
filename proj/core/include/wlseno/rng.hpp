#pragma once

#include <cstdint>
#include <random>

namespace wlseno {

// Uniform doubles on top of mt19937_64. The bit-to-double mapping is done by
// hand so sequences are identical across standard library implementations
// (distribution objects make no such guarantee).
class UniformRng {
public:
    explicit UniformRng(uint64_t seed) : eng_(seed) {}
    double next01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double symmetric() { return 2.0 * next01() - 1.0; }

private:
    std::mt19937_64 eng_;
};

}  // namespace wlseno
