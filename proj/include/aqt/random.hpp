#pragma once

#include <concepts>
#include <cstdint>
#include <random>

namespace aqt {

/// Anything that hands out uniform doubles in [0, 1).
template <class R>
concept UniformSource = requires(R &r) {
    { r.uniform() } -> std::convertible_to<double>;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic uniform source.
///
/// Per-run sources are derived as
///   mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(run_index * 2 + stream)))
/// and each uniform is (next() >> 11) * 2^-53. Both pieces are fully
/// specified by the standard, so syndrome sequences reproduce across
/// compilers and standard libraries. Stream 0 drives the protocol, stream 1
/// the eavesdropper.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    static RandomSource for_run(std::uint64_t seed, std::uint64_t run_index, std::uint64_t stream = 0) {
        return RandomSource(splitmix64(splitmix64(seed) ^ splitmix64(run_index * 2 + stream)));
    }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

static_assert(UniformSource<RandomSource>);

}  // namespace aqt
