#pragma once

#include <cstdint>
#include <random>

namespace netshield {

// One step of the splitmix64 stream; advances state and returns the output.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic per-trial seed: mixes (seed, index) so Monte-Carlo fan-out
// gives the same per-trial streams regardless of how trials are scheduled.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/* Seedable generator for the simulators.
 *
 * mt19937_64 has a standard-specified sequence, and the deviates below are
 * built from explicit bit manipulation, so a seed pins the sample path down
 * to the bit across platforms and standard libraries.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0, 1], 53-bit resolution. Never returns 0, so logs are safe.
    double uniform01();

    // Exponential deviate with the given rate (mean 1/rate); rate must be > 0.
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

}  // namespace netshield
