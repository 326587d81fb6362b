#include "spw/types.hpp"

#include <numeric>

namespace spw {

std::string to_string(SourceTag tag) {
    return tag == SourceTag::expert ? "expert" : "behavior";
}

SourceTag source_tag_from_string(const std::string& s) {
    if (s == "expert") return SourceTag::expert;
    if (s == "behavior") return SourceTag::behavior;
    fail(ErrorCode::parse, "unknown source tag '" + s + "'");
}

Vec Transition::concat() const {
    Vec out;
    out.reserve(state.size() + action.size());
    out.insert(out.end(), state.begin(), state.end());
    out.insert(out.end(), action.begin(), action.end());
    return out;
}

double Trajectory::gt_return() const {
    if (!gt_rewards)
        fail(ErrorCode::empty_input, "trajectory carries no ground-truth rewards");
    return std::accumulate(gt_rewards->begin(), gt_rewards->end(), 0.0);
}

double Segment::gt_return() const {
    if (!gt_rewards)
        fail(ErrorCode::empty_input, "segment carries no ground-truth rewards");
    return std::accumulate(gt_rewards->begin(), gt_rewards->end(), 0.0);
}

size_t ExpertTransitionSet::state_dim() const {
    if (transitions.empty())
        fail(ErrorCode::empty_input, "expert transition set is empty");
    return transitions.front().state_dim();
}

size_t ExpertTransitionSet::action_dim() const {
    if (transitions.empty())
        fail(ErrorCode::empty_input, "expert transition set is empty");
    return transitions.front().action_dim();
}

bool is_valid_label(double label) {
    return label == 0.0 || label == 0.5 || label == 1.0;
}

void check_dims(const Transition& t, size_t state_dim, size_t action_dim,
                const std::string& context) {
    if (t.state_dim() != state_dim || t.action_dim() != action_dim) {
        fail(ErrorCode::dimension_mismatch,
             context + ": expected state/action dims " + std::to_string(state_dim) +
                 "/" + std::to_string(action_dim) + ", got " +
                 std::to_string(t.state_dim()) + "/" + std::to_string(t.action_dim()));
    }
}

}  // namespace spw
