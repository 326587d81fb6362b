#pragma once

#include <functional>
#include <vector>

#include "spw/reward_model.hpp"
#include "spw/search.hpp"
#include "spw/types.hpp"
#include "spw/weighting.hpp"

namespace spw {

RewardFn model_reward_fn(const RewardModel& model);

/// Min-max normalization to [0, 1]; a constant input maps to all 0.5.
Vec min_max_normalize(const Vec& values);

/// Normalized histogram over [0, 1] with uniform bin edges; the input is
/// min-max normalized first, so a constant input lands in a single bin.
struct RewardHistogram {
    Vec bin_edges;      // length bins + 1
    Vec probabilities;  // length bins, sums to 1
};

RewardHistogram reward_histogram(const Vec& rewards, int bins);

/// KL(p || q) with additive smoothing on both histograms (renormalized), so
/// empty bins stay finite. Requires identical bin edges.
double kl_divergence(const RewardHistogram& p, const RewardHistogram& q,
                     double smoothing = 1e-6);

/// Per-step rewards of the segment, min-max normalized within the segment.
Vec credit_profile(const RewardModel& model, const Segment& segment);
Vec credit_profile_of(const RewardFn& fn, const Segment& segment);

/// Fraction of non-tie held-out pairs whose predicted preference direction
/// matches the label; an exact 0.5 probability earns half credit. Errors if
/// no non-tie pair remains.
double preference_accuracy(const RewardModel& model, const std::vector<PreferencePair>& heldout,
                           const ExpertTransitionSet* expert, Temperature tau, WeightMode mode,
                           const IndexOptions& index_options = {});

/// Aggregate margin R0 - R1 under the active weighting; the logit of the
/// preference probability.
double bt_margin(const RewardModel& model, const WeightedSegment& ws0,
                 const WeightedSegment& ws1);

struct Correlations {
    double pearson = 0.0;
    double spearman = 0.0;
};

/// Pearson r and Spearman rho (average ranks on ties). Errors on constant
/// input, where neither is defined.
Correlations pearson_spearman(const Vec& x, const Vec& y);

}  // namespace spw
