#pragma once

#include <cstdint>
#include <random>

namespace spw {

/// Named sub-streams of a run seed. Each (seed, stream) pair yields an
/// independent deterministic generator, so adding a consumer never shifts
/// the draws of another.
enum class RngStream : std::uint32_t {
    expert_starts = 1,
    behavior_starts = 2,
    behavior_actions = 3,
    segment_sampling = 4,
    heldout_sampling = 5,
    training = 6,
    evaluation = 7,
    rollouts = 8,
    augmentation = 9,
    model_init = 10,
    augmentation_expert_segments = 11,
    augmentation_behavior_segments = 12,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

/// Splitmix64 step; folds a stream tag into a seed so APIs that take a bare
/// seed (segment sampling, training) can be fed independent sub-streams.
inline std::uint64_t derive_seed(std::uint64_t seed, RngStream stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(stream) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace spw
