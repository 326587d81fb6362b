#include "spw/baselines.hpp"

#include <cmath>
#include <random>

#include "spw/error.hpp"
#include "spw/rng.hpp"

namespace spw {

TrainLog mr_train(RewardModel& model, const std::vector<PreferencePair>& pairs,
                  const TrainConfig& config) {
    TrainConfig uniform_config = config;
    uniform_config.weight_mode = WeightMode::uniform;
    return train_reward(model, pairs, nullptr, Temperature::infinity(), uniform_config);
}

double seabo_reward(const NearestNeighborIndex& index, const Transition& t,
                    const SeaboConfig& config) {
    if (config.beta <= 0.0 || config.amplitude <= 0.0)
        fail(ErrorCode::invalid_argument, "seabo beta and amplitude must be positive");
    return config.amplitude * std::exp(-config.beta * index.nearest_distance(t));
}

std::vector<PreferencePair> drex_augment(const std::vector<Segment>& expert_segments,
                                         const std::vector<Segment>& behavior_segments, int k,
                                         std::uint64_t seed) {
    if (expert_segments.empty() || behavior_segments.empty())
        fail(ErrorCode::empty_input, "augmentation needs expert and behavior segments");
    if (k < 1) fail(ErrorCode::invalid_argument, "augmentation count must be positive");

    auto rng = make_rng(seed, RngStream::augmentation);
    std::uniform_int_distribution<size_t> pick_expert(0, expert_segments.size() - 1);
    std::uniform_int_distribution<size_t> pick_behavior(0, behavior_segments.size() - 1);

    std::vector<PreferencePair> pairs;
    pairs.reserve(k);
    for (int i = 0; i < k; ++i) {
        PreferencePair pair;
        pair.seg0 = expert_segments[pick_expert(rng)];
        pair.seg1 = behavior_segments[pick_behavior(rng)];
        pair.label = 0.0;  // expert preferred by construction
        if (pair.seg0.length() != pair.seg1.length())
            fail(ErrorCode::dimension_mismatch,
                 "expert and behavior segments must share one length");
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

double rd_loss(const RewardModel& model, const WeightedSegment& ws) {
    return redistribution_loss(model, ws);
}

}  // namespace spw
