#include "spw/dataset.hpp"

#include <random>

#include "spw/error.hpp"
#include "spw/rng.hpp"

namespace spw {

ExpertTransitionSet build_expert_transition_set(const std::vector<Trajectory>& demos) {
    if (demos.empty())
        fail(ErrorCode::empty_input, "cannot build an expert transition set from zero demos");
    ExpertTransitionSet set;
    for (size_t i = 0; i < demos.size(); ++i) {
        if (demos[i].source != SourceTag::expert)
            fail(ErrorCode::invalid_argument,
                 "demo " + std::to_string(i) + " is not tagged expert");
        set.transitions.insert(set.transitions.end(), demos[i].transitions.begin(),
                               demos[i].transitions.end());
    }
    return set;
}

std::vector<Segment> sample_segments(const std::vector<Trajectory>& trajectories, int H, int k,
                                     std::uint64_t seed) {
    if (H < 1) fail(ErrorCode::invalid_argument, "segment length H must be positive");
    if (k < 1) fail(ErrorCode::invalid_argument, "segment count k must be positive");

    // flatten the valid (trajectory, offset) windows
    struct Window {
        size_t traj;
        size_t offset;
    };
    std::vector<Window> windows;
    for (size_t i = 0; i < trajectories.size(); ++i) {
        const size_t len = trajectories[i].length();
        for (size_t off = 0; off + H <= len; ++off) windows.push_back({i, off});
    }
    if (windows.empty())
        fail(ErrorCode::empty_input,
             "no trajectory admits a window of length " + std::to_string(H));

    auto rng = make_rng(seed);
    std::uniform_int_distribution<size_t> pick(0, windows.size() - 1);
    std::vector<Segment> out;
    out.reserve(k);
    for (int j = 0; j < k; ++j) {
        const Window w = windows[pick(rng)];
        const Trajectory& traj = trajectories[w.traj];
        Segment seg;
        seg.transitions.assign(traj.transitions.begin() + w.offset,
                               traj.transitions.begin() + w.offset + H);
        if (traj.gt_rewards)
            seg.gt_rewards = Vec(traj.gt_rewards->begin() + w.offset,
                                 traj.gt_rewards->begin() + w.offset + H);
        out.push_back(std::move(seg));
    }
    return out;
}

PreferencePair label_preference(const Segment& seg0, const Segment& seg1, double tie_epsilon) {
    if (!seg0.has_rewards() || !seg1.has_rewards())
        fail(ErrorCode::empty_input, "cannot label segments without ground-truth rewards");
    if (seg0.length() != seg1.length())
        fail(ErrorCode::dimension_mismatch, "preference segments must have equal length");
    const double g0 = seg0.gt_return();
    const double g1 = seg1.gt_return();
    PreferencePair pair{seg0, seg1, 0.5};
    if (g0 - g1 > tie_epsilon)
        pair.label = 0.0;
    else if (g1 - g0 > tie_epsilon)
        pair.label = 1.0;
    return pair;
}

std::vector<PreferencePair> pair_and_label(const std::vector<Segment>& segments,
                                           double tie_epsilon) {
    std::vector<PreferencePair> pairs;
    pairs.reserve(segments.size() / 2);
    for (size_t i = 0; i + 1 < segments.size(); i += 2)
        pairs.push_back(label_preference(segments[i], segments[i + 1], tie_epsilon));
    return pairs;
}

std::pair<std::vector<Trajectory>, std::vector<Trajectory>> generate_synthetic_mdp_data(
    const SyntheticTask& task, int n_expert, int n_behavior, double noise, std::uint64_t seed) {
    if (n_expert < 0 || n_behavior < 0)
        fail(ErrorCode::invalid_argument, "episode counts must be nonnegative");
    if (noise < 0.0 || noise > 1.0)
        fail(ErrorCode::invalid_argument, "noise must lie in [0, 1]");

    Policy optimal = [&task](const Vec& state, std::mt19937_64&) {
        return task.optimal_action(state);
    };
    Policy mixed = [&task, noise](const Vec& state, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        if (coin(rng) < noise) return task.random_action(rng);
        return task.optimal_action(state);
    };

    std::vector<Trajectory> experts;
    experts.reserve(n_expert);
    {
        auto start_rng = make_rng(seed, RngStream::expert_starts);
        for (int i = 0; i < n_expert; ++i) {
            Vec start = task.sample_start(start_rng);
            experts.push_back(rollout(task, start, optimal, start_rng, SourceTag::expert));
        }
    }

    std::vector<Trajectory> behaviors;
    behaviors.reserve(n_behavior);
    {
        auto start_rng = make_rng(seed, RngStream::behavior_starts);
        auto action_rng = make_rng(seed, RngStream::behavior_actions);
        for (int i = 0; i < n_behavior; ++i) {
            Vec start = task.sample_start(start_rng);
            behaviors.push_back(rollout(task, start, mixed, action_rng, SourceTag::behavior));
        }
    }
    return {std::move(experts), std::move(behaviors)};
}

}  // namespace spw
