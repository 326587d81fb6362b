#include "spw/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spw {

using nlohmann::json;

namespace {

Vec parse_number_list(const json& j, const std::string& what, size_t line_no) {
    if (!j.is_array())
        fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + what + " is not a list");
    Vec out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number())
            fail(ErrorCode::parse,
                 "line " + std::to_string(line_no) + ": " + what + " contains a non-number");
        double x = v.get<double>();
        if (!std::isfinite(x))
            fail(ErrorCode::parse,
                 "line " + std::to_string(line_no) + ": " + what + " contains a non-finite value");
        out.push_back(x);
    }
    return out;
}

std::vector<Transition> parse_transitions(const json& states, const json& actions,
                                          size_t line_no) {
    if (!states.is_array() || !actions.is_array())
        fail(ErrorCode::parse,
             "line " + std::to_string(line_no) + ": states/actions must be lists");
    if (states.size() != actions.size())
        fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": states has " +
                                   std::to_string(states.size()) + " entries but actions has " +
                                   std::to_string(actions.size()));
    std::vector<Transition> out;
    out.reserve(states.size());
    for (size_t t = 0; t < states.size(); ++t) {
        Transition tr;
        tr.state = parse_number_list(states[t], "state " + std::to_string(t), line_no);
        tr.action = parse_number_list(actions[t], "action " + std::to_string(t), line_no);
        out.push_back(std::move(tr));
    }
    return out;
}

/// Tracks the state/action widths of the first record and enforces them on
/// every later one.
struct DimChecker {
    bool seen = false;
    size_t state_dim = 0;
    size_t action_dim = 0;

    void check(const std::vector<Transition>& transitions, size_t line_no) {
        for (const auto& tr : transitions) {
            if (!seen) {
                state_dim = tr.state_dim();
                action_dim = tr.action_dim();
                seen = true;
                continue;
            }
            if (tr.state_dim() != state_dim || tr.action_dim() != action_dim)
                fail(ErrorCode::dimension_mismatch,
                     "line " + std::to_string(line_no) + ": state/action dims " +
                         std::to_string(tr.state_dim()) + "/" + std::to_string(tr.action_dim()) +
                         " do not match first record's " + std::to_string(state_dim) + "/" +
                         std::to_string(action_dim));
        }
    }
};

json parse_line(const std::string& line, size_t line_no) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
        fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": malformed JSON");
    if (!j.is_object())
        fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": record is not an object");
    return j;
}

json segment_to_json(const Segment& seg) {
    json states = json::array();
    json actions = json::array();
    for (const auto& tr : seg.transitions) {
        states.push_back(tr.state);
        actions.push_back(tr.action);
    }
    json out{{"states", std::move(states)}, {"actions", std::move(actions)}};
    if (seg.gt_rewards) out["rewards"] = *seg.gt_rewards;
    return out;
}

Segment segment_from_json(const json& j, const std::string& what, size_t line_no) {
    if (!j.is_object() || !j.contains("states") || !j.contains("actions"))
        fail(ErrorCode::parse,
             "line " + std::to_string(line_no) + ": " + what + " needs states and actions");
    Segment seg;
    seg.transitions = parse_transitions(j["states"], j["actions"], line_no);
    if (j.contains("rewards")) {
        Vec rewards = parse_number_list(j["rewards"], what + " rewards", line_no);
        if (rewards.size() != seg.transitions.size())
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + what + " has " +
                                       std::to_string(rewards.size()) + " rewards for " +
                                       std::to_string(seg.transitions.size()) + " transitions");
        seg.gt_rewards = std::move(rewards);
    }
    return seg;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::vector<Trajectory> load_trajectories(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::vector<Trajectory> out;
    DimChecker dims;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = parse_line(line, line_no);
        if (!j.contains("source") || !j.contains("states") || !j.contains("actions"))
            fail(ErrorCode::parse, "line " + std::to_string(line_no) +
                                       ": trajectory needs source, states and actions");
        Trajectory traj;
        traj.source = source_tag_from_string(j["source"].get<std::string>());
        traj.transitions = parse_transitions(j["states"], j["actions"], line_no);
        if (traj.transitions.empty())
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": empty trajectory");
        if (j.contains("rewards")) {
            Vec rewards = parse_number_list(j["rewards"], "rewards", line_no);
            if (rewards.size() != traj.transitions.size())
                fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": " +
                                           std::to_string(rewards.size()) + " rewards for " +
                                           std::to_string(traj.transitions.size()) +
                                           " transitions");
            traj.gt_rewards = std::move(rewards);
        }
        dims.check(traj.transitions, line_no);
        out.push_back(std::move(traj));
    }
    return out;
}

void save_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories) {
    std::ofstream out = open_for_write(path);
    for (const auto& traj : trajectories) {
        json states = json::array();
        json actions = json::array();
        for (const auto& tr : traj.transitions) {
            states.push_back(tr.state);
            actions.push_back(tr.action);
        }
        json j{{"source", to_string(traj.source)},
               {"states", std::move(states)},
               {"actions", std::move(actions)}};
        if (traj.gt_rewards) j["rewards"] = *traj.gt_rewards;
        out << j.dump() << '\n';
    }
    if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

std::vector<PreferencePair> load_preferences(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::vector<PreferencePair> out;
    DimChecker dims;
    std::string line;
    size_t line_no = 0;
    size_t segment_length = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = parse_line(line, line_no);
        if (!j.contains("seg0") || !j.contains("seg1") || !j.contains("label"))
            fail(ErrorCode::parse,
                 "line " + std::to_string(line_no) + ": pair needs seg0, seg1 and label");
        PreferencePair pair;
        pair.seg0 = segment_from_json(j["seg0"], "seg0", line_no);
        pair.seg1 = segment_from_json(j["seg1"], "seg1", line_no);
        if (!j["label"].is_number())
            fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": label is not a number");
        pair.label = j["label"].get<double>();
        if (!is_valid_label(pair.label))
            fail(ErrorCode::parse,
                 "line " + std::to_string(line_no) + ": label must be 0, 0.5 or 1");
        if (pair.seg0.length() != pair.seg1.length())
            fail(ErrorCode::parse,
                 "line " + std::to_string(line_no) + ": segments differ in length");
        if (segment_length == 0) segment_length = pair.seg0.length();
        if (pair.seg0.length() != segment_length)
            fail(ErrorCode::parse, "line " + std::to_string(line_no) +
                                       ": segment length differs from first record's");
        dims.check(pair.seg0.transitions, line_no);
        dims.check(pair.seg1.transitions, line_no);
        out.push_back(std::move(pair));
    }
    return out;
}

void save_preferences(const std::string& path, const std::vector<PreferencePair>& pairs) {
    std::ofstream out = open_for_write(path);
    for (const auto& pair : pairs) {
        json j{{"seg0", segment_to_json(pair.seg0)},
               {"seg1", segment_to_json(pair.seg1)},
               {"label", pair.label}};
        out << j.dump() << '\n';
    }
    if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

}  // namespace spw
