#include "netshield/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace netshield {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state = a ^ (index * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
    std::uint64_t b = splitmix64(state);
    return b;
}

double Rng::uniform01() {
    // 53 uniform bits mapped to (0, 1]: u = (k + 1) * 2^-53 with k in [0, 2^53).
    const std::uint64_t k = next_u64() >> 11;
    return (static_cast<double>(k) + 1.0) * 0x1.0p-53;
}

double Rng::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("Rng::exponential: rate must be positive");
    return -std::log(uniform01()) / rate;
}

}  // namespace netshield
