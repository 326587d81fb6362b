#include "spw/task.hpp"

#include <algorithm>
#include <cmath>

#include "spw/error.hpp"

namespace spw {

namespace {

constexpr double kPi = 3.14159265358979323846;

// grid action order: up, down, left, right
constexpr int kRowDelta[4] = {-1, 1, 0, 0};
constexpr int kColDelta[4] = {0, 0, -1, 1};

int grid_action_index(const Vec& action) {
    if (action.size() != 4)
        fail(ErrorCode::dimension_mismatch, "grid-nav expects a 4-entry one-hot action");
    return static_cast<int>(std::max_element(action.begin(), action.end()) - action.begin());
}

Vec grid_one_hot(int a) {
    Vec v(4, 0.0);
    v[static_cast<size_t>(a)] = 1.0;
    return v;
}

double clampd(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

SyntheticTask SyntheticTask::make(const std::string& name, const TaskParams& params) {
    SyntheticTask task;
    task.name_ = name;
    task.params_ = params;
    if (name == "grid-nav") {
        task.kind_ = Kind::grid_nav;
        if (params.grid_size < 2)
            fail(ErrorCode::invalid_argument, "grid_size must be at least 2");
    } else if (name == "point-goal") {
        task.kind_ = Kind::point_goal;
        if (params.step <= 0 || params.bound <= 0 || params.goal_radius <= 0)
            fail(ErrorCode::invalid_argument, "point-goal needs positive step/bound/radius");
        if (params.plan_cells < 2)
            fail(ErrorCode::invalid_argument, "plan_cells must be at least 2");
    } else {
        fail(ErrorCode::invalid_argument, "unknown task '" + name + "'");
    }
    if (params.gamma < 0 || params.gamma >= 1)
        fail(ErrorCode::invalid_argument, "gamma must lie in [0, 1)");
    if (params.horizon < 1) fail(ErrorCode::invalid_argument, "horizon must be positive");
    return task;
}

size_t SyntheticTask::state_dim() const { return 2; }

size_t SyntheticTask::action_dim() const { return kind_ == Kind::grid_nav ? 4 : 2; }

Vec SyntheticTask::sample_start(std::mt19937_64& rng) const {
    if (kind_ == Kind::grid_nav) {
        const int g = params_.grid_size;
        std::uniform_int_distribution<int> cell(0, g * g - 1);
        while (true) {
            int s = cell(rng);
            Vec state{static_cast<double>(s / g), static_cast<double>(s % g)};
            if (!in_goal(state)) return state;
        }
    }
    std::uniform_real_distribution<double> coord(0.0, params_.bound);
    while (true) {
        Vec state{coord(rng), coord(rng)};
        if (!in_goal(state)) return state;
    }
}

Vec SyntheticTask::env_step(const Vec& state, const Vec& action) const {
    if (kind_ == Kind::grid_nav) {
        if (in_goal(state)) return state;  // absorbing goal
        const int g = params_.grid_size;
        int a = grid_action_index(action);
        double row = clampd(state[0] + kRowDelta[a], 0.0, g - 1.0);
        double col = clampd(state[1] + kColDelta[a], 0.0, g - 1.0);
        return Vec{row, col};
    }
    if (action.size() != 2)
        fail(ErrorCode::dimension_mismatch, "point-goal expects a 2D action");
    return Vec{clampd(state[0] + action[0], 0.0, params_.bound),
               clampd(state[1] + action[1], 0.0, params_.bound)};
}

double SyntheticTask::gt_reward(const Vec& state, const Vec& action) const {
    return in_goal(env_step(state, action)) ? 1.0 : 0.0;
}

bool SyntheticTask::in_goal(const Vec& state) const {
    if (kind_ == Kind::grid_nav) {
        const double g = params_.grid_size - 1.0;
        return std::lround(state[0]) == std::lround(g) && std::lround(state[1]) == std::lround(g);
    }
    const double dx = state[0] - params_.goal_x;
    const double dy = state[1] - params_.goal_y;
    return dx * dx + dy * dy <= params_.goal_radius * params_.goal_radius;
}

Vec SyntheticTask::optimal_action(const Vec& state) const {
    if (kind_ == Kind::grid_nav) {
        const double g = params_.grid_size - 1.0;
        const double dr = g - state[0];
        const double dc = g - state[1];
        if (dr == 0 && dc == 0) return grid_one_hot(0);  // absorbed; action is moot
        // close the wider gap first; ties go to the row axis
        if (std::abs(dr) >= std::abs(dc) && dr != 0) return grid_one_hot(dr > 0 ? 1 : 0);
        return grid_one_hot(dc > 0 ? 3 : 2);
    }
    const double dx = params_.goal_x - state[0];
    const double dy = params_.goal_y - state[1];
    const double dist = std::hypot(dx, dy);
    if (dist < 1e-12) return Vec{params_.step, 0.0};
    return Vec{params_.step * dx / dist, params_.step * dy / dist};
}

Vec SyntheticTask::random_action(std::mt19937_64& rng) const {
    if (kind_ == Kind::grid_nav) {
        std::uniform_int_distribution<int> pick(0, 3);
        return grid_one_hot(pick(rng));
    }
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    double theta = angle(rng);
    return Vec{params_.step * std::cos(theta), params_.step * std::sin(theta)};
}

int SyntheticTask::num_plan_states() const {
    if (kind_ == Kind::grid_nav) return params_.grid_size * params_.grid_size;
    return params_.plan_cells * params_.plan_cells;
}

int SyntheticTask::num_plan_actions() const { return kind_ == Kind::grid_nav ? 4 : 8; }

Vec SyntheticTask::plan_state(int s) const {
    if (kind_ == Kind::grid_nav) {
        const int g = params_.grid_size;
        return Vec{static_cast<double>(s / g), static_cast<double>(s % g)};
    }
    const int cells = params_.plan_cells;
    const double width = params_.bound / cells;
    const int row = s / cells;
    const int col = s % cells;
    return Vec{(row + 0.5) * width, (col + 0.5) * width};
}

Vec SyntheticTask::plan_action(int a) const {
    if (kind_ == Kind::grid_nav) return grid_one_hot(a);
    // 8 compass directions, all of length `step`
    const double theta = a * kPi / 4.0;
    return Vec{params_.step * std::cos(theta), params_.step * std::sin(theta)};
}

int SyntheticTask::state_index(const Vec& state) const {
    if (kind_ == Kind::grid_nav) {
        const int g = params_.grid_size;
        int row = static_cast<int>(std::lround(state[0]));
        int col = static_cast<int>(std::lround(state[1]));
        row = std::clamp(row, 0, g - 1);
        col = std::clamp(col, 0, g - 1);
        return row * g + col;
    }
    const int cells = params_.plan_cells;
    const double width = params_.bound / cells;
    int row = std::clamp(static_cast<int>(state[0] / width), 0, cells - 1);
    int col = std::clamp(static_cast<int>(state[1] / width), 0, cells - 1);
    return row * cells + col;
}

int SyntheticTask::plan_next(int s, int a) const {
    return state_index(env_step(plan_state(s), plan_action(a)));
}

Trajectory rollout(const SyntheticTask& task, const Vec& start, const Policy& policy,
                   std::mt19937_64& rng, SourceTag tag) {
    Trajectory traj;
    traj.source = tag;
    traj.gt_rewards = Vec{};
    traj.transitions.reserve(task.horizon());
    traj.gt_rewards->reserve(task.horizon());
    Vec state = start;
    for (int t = 0; t < task.horizon(); ++t) {
        Vec action = policy(state, rng);
        traj.gt_rewards->push_back(task.gt_reward(state, action));
        Vec next = task.env_step(state, action);
        traj.transitions.push_back(Transition{std::move(state), std::move(action)});
        state = std::move(next);
    }
    return traj;
}

}  // namespace spw
