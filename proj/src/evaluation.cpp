#include "spw/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spw/error.hpp"

namespace spw {

namespace {

/// Average ranks (1-based); ties share the mean of their rank range.
Vec average_ranks(const Vec& values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&values](size_t a, size_t b) { return values[a] < values[b]; });
    Vec ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double pearson(const Vec& x, const Vec& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        fail(ErrorCode::invalid_argument, "correlation undefined for constant input");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

RewardFn model_reward_fn(const RewardModel& model) {
    return [&model](const Transition& t) { return predict_reward(model, t); };
}

Vec min_max_normalize(const Vec& values) {
    if (values.empty()) fail(ErrorCode::empty_input, "cannot normalize an empty list");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) return Vec(values.size(), 0.5);
    Vec out(values.size());
    for (size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / (hi - lo);
    return out;
}

RewardHistogram reward_histogram(const Vec& rewards, int bins) {
    if (rewards.empty()) fail(ErrorCode::empty_input, "cannot histogram an empty reward list");
    if (bins < 1) fail(ErrorCode::invalid_argument, "need at least one bin");

    const Vec normalized = min_max_normalize(rewards);
    RewardHistogram hist;
    hist.bin_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i)
        hist.bin_edges[i] = static_cast<double>(i) / static_cast<double>(bins);
    hist.probabilities.assign(bins, 0.0);
    for (double v : normalized) {
        int bin = static_cast<int>(v * bins);
        if (bin >= bins) bin = bins - 1;  // v == 1 belongs to the last bin
        hist.probabilities[bin] += 1.0;
    }
    for (double& p : hist.probabilities) p /= static_cast<double>(normalized.size());
    return hist;
}

double kl_divergence(const RewardHistogram& p, const RewardHistogram& q, double smoothing) {
    if (p.bin_edges != q.bin_edges)
        fail(ErrorCode::dimension_mismatch, "histograms have different bin edges");
    const size_t bins = p.probabilities.size();
    const double z = 1.0 + smoothing * static_cast<double>(bins);
    double kl = 0.0;
    for (size_t i = 0; i < bins; ++i) {
        const double pi = (p.probabilities[i] + smoothing) / z;
        const double qi = (q.probabilities[i] + smoothing) / z;
        kl += pi * std::log(pi / qi);
    }
    return kl;
}

Vec credit_profile(const RewardModel& model, const Segment& segment) {
    return min_max_normalize(predict_rewards(model, segment));
}

Vec credit_profile_of(const RewardFn& fn, const Segment& segment) {
    Vec raw;
    raw.reserve(segment.length());
    for (const auto& tr : segment.transitions) raw.push_back(fn(tr));
    return min_max_normalize(raw);
}

double preference_accuracy(const RewardModel& model, const std::vector<PreferencePair>& heldout,
                           const ExpertTransitionSet* expert, Temperature tau, WeightMode mode,
                           const IndexOptions& index_options) {
    if (heldout.empty()) fail(ErrorCode::empty_input, "no held-out pairs to score");

    const bool uniform = mode == WeightMode::uniform || tau.is_infinite();
    std::vector<WeightedPair> weighted;
    weighted.reserve(heldout.size());
    if (uniform) {
        for (const auto& pair : heldout) {
            if (pair.label == 0.5) continue;
            weighted.push_back(WeightedPair{uniform_weighted(pair.seg0),
                                            uniform_weighted(pair.seg1), pair.label});
        }
    } else {
        if (expert == nullptr || expert->empty())
            fail(ErrorCode::empty_input, "similarity weighting needs a nonempty expert set");
        const NearestNeighborIndex index = NearestNeighborIndex::build(*expert, index_options);
        for (const auto& pair : heldout) {
            if (pair.label == 0.5) continue;
            weighted.push_back(WeightedPair{weight_segment(index, pair.seg0, tau),
                                            weight_segment(index, pair.seg1, tau), pair.label});
        }
    }
    if (weighted.empty())
        fail(ErrorCode::empty_input, "every held-out pair is a tie; accuracy undefined");
    return pairwise_accuracy(model, weighted);
}

double bt_margin(const RewardModel& model, const WeightedSegment& ws0,
                 const WeightedSegment& ws1) {
    return weighted_return(model, ws0) - weighted_return(model, ws1);
}

Correlations pearson_spearman(const Vec& x, const Vec& y) {
    if (x.size() != y.size())
        fail(ErrorCode::dimension_mismatch, "correlation inputs differ in length");
    if (x.size() < 2) fail(ErrorCode::invalid_argument, "correlation needs at least 2 points");
    Correlations c;
    c.pearson = pearson(x, y);
    c.spearman = pearson(average_ranks(x), average_ranks(y));
    return c;
}

}  // namespace spw
