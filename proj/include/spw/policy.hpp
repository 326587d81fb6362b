#pragma once

#include <cstdint>
#include <vector>

#include "spw/reward_model.hpp"
#include "spw/task.hpp"
#include "spw/types.hpp"

namespace spw {

/// Greedy action per discretized state.
struct TabularPolicy {
    std::vector<int> actions;
};

enum class RewardSource { ground_truth, model };

struct ValueIterationResult {
    TabularPolicy policy;
    Vec values;
    int iterations = 0;
    double residual = 0.0;
};

/// Reward table over the task's discretization, laid out state-major
/// (s * num_plan_actions + a).
Vec gt_reward_table(const SyntheticTask& task);
Vec reward_fn_table(const SyntheticTask& task, const RewardFn& fn);

/// Synchronous value iteration on the discretized MDP until the sup-norm
/// Bellman residual drops below tol; greedy extraction breaks ties toward
/// the lowest action index. Errors if the iteration cap is hit first.
ValueIterationResult value_iteration_table(const SyntheticTask& task, const Vec& rewards,
                                           double tol, int max_iters = 100000);

ValueIterationResult value_iteration(const SyntheticTask& task, RewardSource source,
                                     const RewardModel* model, double tol,
                                     int max_iters = 100000);

/// Fraction of seeded rollouts that reach the goal within the horizon.
/// Episode i draws its start from seed + i, so results are independent of
/// evaluation order.
double success_rate(const TabularPolicy& policy, const SyntheticTask& task, int episodes,
                    std::uint64_t seed);

/// Replaces ground-truth rewards with model predictions, step by step.
/// Pure: the input trajectories are untouched.
std::vector<Trajectory> relabel_dataset(const std::vector<Trajectory>& trajectories,
                                        const RewardModel& model);

}  // namespace spw
