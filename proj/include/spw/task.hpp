#pragma once

#include <functional>
#include <random>
#include <string>

#include "spw/types.hpp"

namespace spw {

struct TaskParams {
    double gamma = 0.99;
    int horizon = 60;
    // grid-nav
    int grid_size = 15;
    // point-goal
    double bound = 5.0;
    double step = 0.25;
    double goal_x = 4.3;
    double goal_y = 4.3;
    double goal_radius = 0.45;
    int plan_cells = 50;
};

/// Desk-scale benchmark task with a known ground-truth reward.
///
/// grid-nav: deterministic G x G gridworld, state = (row, col) in grid units,
/// four one-hot actions. The goal corner is absorbing; reward is 1 whenever
/// the step lands on the goal, else 0.
///
/// point-goal: continuous box [0, bound]^2, actions are 2D displacement
/// vectors of fixed length `step`, position clamped to the box. Reward is 1
/// whenever the step lands inside the goal ball. The scripted expert walks
/// straight at the goal center, which also holds it inside the ball once
/// there. For planning the box is discretized into plan_cells^2 cells with 8
/// compass actions.
class SyntheticTask {
public:
    enum class Kind { grid_nav, point_goal };

    static SyntheticTask make(const std::string& name, const TaskParams& params = {});

    const std::string& name() const { return name_; }
    Kind kind() const { return kind_; }
    const TaskParams& params() const { return params_; }
    double gamma() const { return params_.gamma; }
    int horizon() const { return params_.horizon; }

    size_t state_dim() const;
    size_t action_dim() const;

    // environment
    Vec sample_start(std::mt19937_64& rng) const;
    Vec env_step(const Vec& state, const Vec& action) const;
    double gt_reward(const Vec& state, const Vec& action) const;
    bool in_goal(const Vec& state) const;
    Vec optimal_action(const Vec& state) const;
    Vec random_action(std::mt19937_64& rng) const;

    // planning discretization
    int num_plan_states() const;
    int num_plan_actions() const;
    Vec plan_state(int s) const;
    Vec plan_action(int a) const;
    int state_index(const Vec& state) const;
    int plan_next(int s, int a) const;

private:
    SyntheticTask() = default;

    Kind kind_ = Kind::grid_nav;
    std::string name_;
    TaskParams params_;
};

using Policy = std::function<Vec(const Vec& state, std::mt19937_64& rng)>;

/// Runs `horizon` steps from `start`, recording transitions and ground-truth
/// rewards. Success within the episode is equivalent to a positive return.
Trajectory rollout(const SyntheticTask& task, const Vec& start, const Policy& policy,
                   std::mt19937_64& rng, SourceTag tag);

}  // namespace spw
