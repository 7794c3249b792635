#pragma once

#include <cstdint>
#include <random>

namespace busyvar {

// Deterministic uniform generator: a fixed engine plus a fixed bits-to-double
// mapping, so one seed reproduces the same draw sequence everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [0, 1) using the top 53 bits.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Fixed splitting rule mapping (seed, stream index) to a substream seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace busyvar
