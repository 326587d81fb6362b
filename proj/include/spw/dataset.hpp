#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spw/task.hpp"
#include "spw/types.hpp"

namespace spw {

/// Pools all transitions of the demonstrations, trajectory order then time
/// order, duplicates preserved. Every input must be tagged expert.
ExpertTransitionSet build_expert_transition_set(const std::vector<Trajectory>& demos);

/// Draws k contiguous windows of length H, uniformly over all valid
/// (trajectory, start offset) pairs, with replacement. Ground-truth rewards
/// are carried along when present. Errors if no trajectory is long enough.
std::vector<Segment> sample_segments(const std::vector<Trajectory>& trajectories, int H, int k,
                                     std::uint64_t seed);

/// Labels a pair from ground-truth returns: 0 if seg0 wins by more than
/// tie_epsilon, 1 if seg1 does, 0.5 otherwise.
PreferencePair label_preference(const Segment& seg0, const Segment& seg1, double tie_epsilon);

/// Pairs up consecutive segments (0,1), (2,3), ... and labels each pair.
std::vector<PreferencePair> pair_and_label(const std::vector<Segment>& segments,
                                           double tie_epsilon);

/// Rolls out `n_expert` scripted-optimal and `n_behavior` noise-mixed
/// episodes. The behavior policy takes a uniformly random action with
/// probability `noise` and the scripted-optimal one otherwise. All
/// trajectories carry ground-truth rewards; starts are drawn from the task's
/// start distribution.
std::pair<std::vector<Trajectory>, std::vector<Trajectory>> generate_synthetic_mdp_data(
    const SyntheticTask& task, int n_expert, int n_behavior, double noise, std::uint64_t seed);

}  // namespace spw
