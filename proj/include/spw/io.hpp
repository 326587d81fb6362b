#pragma once

#include <string>
#include <vector>

#include "spw/types.hpp"

namespace spw {

/// Trajectory file: JSON lines, one object per trajectory with fields
///   source: "expert" | "behavior"
///   states: list of state vectors
///   actions: list of action vectors (same length as states)
///   rewards: optional list of numbers, one per transition
/// Dimensions are validated against the first record; a malformed line or
/// a width change raises a parse/dimension error naming the line.
std::vector<Trajectory> load_trajectories(const std::string& path);
void save_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories);

/// Preference file: JSON lines with fields seg0, seg1 (each {states, actions}
/// and optionally rewards) and label in {0, 0.5, 1}.
std::vector<PreferencePair> load_preferences(const std::string& path);
void save_preferences(const std::string& path, const std::vector<PreferencePair>& pairs);

}  // namespace spw
