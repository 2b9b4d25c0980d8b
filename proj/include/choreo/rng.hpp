#pragma once
#include <cstdint>
#include <random>

namespace choreo {

// Deterministic RNG helpers. std::uniform_real_distribution is not guaranteed
// to produce identical streams across standard libraries, so doubles are
// derived from the raw 64-bit stream directly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo,hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0,n)
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

private:
    std::mt19937_64 eng_;
};

} // namespace choreo
