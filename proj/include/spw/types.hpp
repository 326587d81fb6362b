#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spw/error.hpp"

namespace spw {

using Vec = std::vector<double>;

enum class SourceTag { expert, behavior };

std::string to_string(SourceTag tag);
SourceTag source_tag_from_string(const std::string& s);

/// One (state, action) pair in environment units.
struct Transition {
    Vec state;
    Vec action;

    size_t state_dim() const { return state.size(); }
    size_t action_dim() const { return action.size(); }

    /// State concatenated with action, the point fed to distance queries
    /// and the reward predictor.
    Vec concat() const;
};

struct Trajectory {
    std::vector<Transition> transitions;
    std::optional<Vec> gt_rewards;  // one entry per transition when present
    SourceTag source = SourceTag::behavior;

    size_t length() const { return transitions.size(); }
    bool has_rewards() const { return gt_rewards.has_value(); }
    double gt_return() const;
};

/// Fixed-length contiguous slice of a trajectory, the unit of preference
/// comparison.
struct Segment {
    std::vector<Transition> transitions;
    std::optional<Vec> gt_rewards;

    size_t length() const { return transitions.size(); }
    bool has_rewards() const { return gt_rewards.has_value(); }
    double gt_return() const;
};

/// Labeled comparison between two equal-length segments.
/// label: 0 = first preferred, 1 = second preferred, 0.5 = indifferent.
struct PreferencePair {
    Segment seg0;
    Segment seg1;
    double label = 0.5;
};

/// All expert transitions pooled over the demonstrations, duplicates kept.
struct ExpertTransitionSet {
    std::vector<Transition> transitions;

    size_t count() const { return transitions.size(); }
    bool empty() const { return transitions.empty(); }
    size_t state_dim() const;
    size_t action_dim() const;
    size_t point_dim() const { return state_dim() + action_dim(); }
};

bool is_valid_label(double label);

/// Per-transition reward view; lets planners and metrics run over learned
/// models and distance-based rewards alike.
using RewardFn = std::function<double(const Transition&)>;

/// Verifies state/action widths against a reference; throws
/// ErrorCode::dimension_mismatch with `context` in the message.
void check_dims(const Transition& t, size_t state_dim, size_t action_dim,
                const std::string& context);

}  // namespace spw
