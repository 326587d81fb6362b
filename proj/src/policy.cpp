#include "spw/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spw/error.hpp"
#include "spw/rng.hpp"

namespace spw {

Vec gt_reward_table(const SyntheticTask& task) {
    return reward_fn_table(task, [&task](const Transition& t) {
        return task.gt_reward(t.state, t.action);
    });
}

Vec reward_fn_table(const SyntheticTask& task, const RewardFn& fn) {
    const int S = task.num_plan_states();
    const int A = task.num_plan_actions();
    Vec table(static_cast<size_t>(S) * A);
    for (int s = 0; s < S; ++s) {
        const Vec state = task.plan_state(s);
        for (int a = 0; a < A; ++a)
            table[static_cast<size_t>(s) * A + a] = fn(Transition{state, task.plan_action(a)});
    }
    return table;
}

ValueIterationResult value_iteration_table(const SyntheticTask& task, const Vec& rewards,
                                           double tol, int max_iters) {
    if (tol <= 0.0) fail(ErrorCode::invalid_argument, "tolerance must be positive");
    const int S = task.num_plan_states();
    const int A = task.num_plan_actions();
    if (rewards.size() != static_cast<size_t>(S) * A)
        fail(ErrorCode::dimension_mismatch, "reward table does not match the discretization");

    std::vector<int> next(static_cast<size_t>(S) * A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) next[static_cast<size_t>(s) * A + a] = task.plan_next(s, a);

    const double gamma = task.gamma();
    Vec values(S, 0.0);
    Vec updated(S, 0.0);
    ValueIterationResult result;
    result.policy.actions.assign(S, 0);

    for (int iter = 1; iter <= max_iters; ++iter) {
        double residual = 0.0;
        for (int s = 0; s < S; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            int best_action = 0;
            for (int a = 0; a < A; ++a) {
                const size_t sa = static_cast<size_t>(s) * A + a;
                const double q = rewards[sa] + gamma * values[next[sa]];
                if (q > best) {  // strict: ties keep the lowest action index
                    best = q;
                    best_action = a;
                }
            }
            updated[s] = best;
            result.policy.actions[s] = best_action;
            residual = std::max(residual, std::abs(updated[s] - values[s]));
        }
        values.swap(updated);
        result.iterations = iter;
        result.residual = residual;
        if (residual < tol) {
            result.values = values;
            return result;
        }
    }
    fail(ErrorCode::not_converged,
         "value iteration hit the cap of " + std::to_string(max_iters) +
             " iterations with residual " + std::to_string(result.residual));
}

ValueIterationResult value_iteration(const SyntheticTask& task, RewardSource source,
                                     const RewardModel* model, double tol, int max_iters) {
    if (source == RewardSource::ground_truth)
        return value_iteration_table(task, gt_reward_table(task), tol, max_iters);
    if (model == nullptr)
        fail(ErrorCode::invalid_argument, "model reward source needs a model");
    const Vec table = reward_fn_table(
        task, [model](const Transition& t) { return predict_reward(*model, t); });
    return value_iteration_table(task, table, tol, max_iters);
}

double success_rate(const TabularPolicy& policy, const SyntheticTask& task, int episodes,
                    std::uint64_t seed) {
    if (episodes < 1) fail(ErrorCode::invalid_argument, "need at least one episode");
    if (policy.actions.size() != static_cast<size_t>(task.num_plan_states()))
        fail(ErrorCode::dimension_mismatch, "policy does not cover the discretization");

    int successes = 0;
    for (int e = 0; e < episodes; ++e) {
        auto rng = make_rng(seed + static_cast<std::uint64_t>(e), RngStream::rollouts);
        Vec state = task.sample_start(rng);
        for (int t = 0; t < task.horizon(); ++t) {
            const int a = policy.actions[task.state_index(state)];
            const Vec action = task.plan_action(a);
            if (task.gt_reward(state, action) > 0.0) {
                ++successes;
                break;
            }
            state = task.env_step(state, action);
        }
    }
    return static_cast<double>(successes) / static_cast<double>(episodes);
}

std::vector<Trajectory> relabel_dataset(const std::vector<Trajectory>& trajectories,
                                        const RewardModel& model) {
    std::vector<Trajectory> out = trajectories;
    for (auto& traj : out) {
        Vec rewards;
        rewards.reserve(traj.length());
        for (const auto& tr : traj.transitions) rewards.push_back(predict_reward(model, tr));
        traj.gt_rewards = std::move(rewards);
    }
    return out;
}

}  // namespace spw
