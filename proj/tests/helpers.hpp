#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "spw/reward_model.hpp"
#include "spw/types.hpp"

namespace spw::test {

inline Vec random_vec(std::mt19937_64& rng, size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vec v(n);
    for (double& x : v) x = u(rng);
    return v;
}

inline Transition random_transition(std::mt19937_64& rng, size_t n, size_t m, double lo = -1.0,
                                    double hi = 1.0) {
    return Transition{random_vec(rng, n, lo, hi), random_vec(rng, m, lo, hi)};
}

inline Segment random_segment(std::mt19937_64& rng, size_t h, size_t n, size_t m,
                              bool with_rewards = false) {
    Segment seg;
    for (size_t t = 0; t < h; ++t) seg.transitions.push_back(random_transition(rng, n, m));
    if (with_rewards) seg.gt_rewards = random_vec(rng, h, 0.0, 1.0);
    return seg;
}

inline ExpertTransitionSet random_expert_set(std::mt19937_64& rng, size_t count, size_t n,
                                             size_t m, double lo = -1.0, double hi = 1.0) {
    ExpertTransitionSet set;
    for (size_t i = 0; i < count; ++i)
        set.transitions.push_back(random_transition(rng, n, m, lo, hi));
    return set;
}

/// Model that outputs the constant c for every input (zero weights, output
/// bias c, no squash).
inline RewardModel constant_model(int state_dim, int action_dim, double c) {
    RewardModel model = init_model(state_dim, action_dim, {1}, 0, Activation::tanh, Squash::none);
    for (auto& layer : model.weights) std::fill(layer.begin(), layer.end(), 0.0);
    for (auto& layer : model.biases) std::fill(layer.begin(), layer.end(), 0.0);
    model.biases.back()[0] = c;
    return model;
}

/// Fresh scratch directory under the build tree working dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    const std::filesystem::path dir = std::filesystem::current_path() / "test_scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace spw::test
