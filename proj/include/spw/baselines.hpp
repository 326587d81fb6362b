#pragma once

#include <cstdint>
#include <vector>

#include "spw/reward_model.hpp"
#include "spw/search.hpp"
#include "spw/types.hpp"

namespace spw {

/// Uniform-weight preference training (the unweighted baseline). Identical,
/// bit for bit, to train_reward at infinite tau with the same seed.
TrainLog mr_train(RewardModel& model, const std::vector<PreferencePair>& pairs,
                  const TrainConfig& config);

struct SeaboConfig {
    double beta = 1.0;       // distance scale
    double amplitude = 1.0;  // reward at distance zero
};

/// Demonstration-only reward: amplitude * exp(-beta * d) where d is the
/// nearest-expert distance. Strictly decreasing in d, bounded in
/// (0, amplitude].
double seabo_reward(const NearestNeighborIndex& index, const Transition& t,
                    const SeaboConfig& config);

/// Synthesizes k preference pairs, each matching a random expert segment
/// against a random behavior segment with the expert preferred (label 0).
std::vector<PreferencePair> drex_augment(const std::vector<Segment>& expert_segments,
                                         const std::vector<Segment>& behavior_segments, int k,
                                         std::uint64_t seed);

/// Redistribution penalty of the weighted variant; see
/// redistribution_loss in the reward model. Re-exported here next to the
/// trainer hook that consumes it (TrainConfig::redistribution_lambda).
double rd_loss(const RewardModel& model, const WeightedSegment& ws);

}  // namespace spw
