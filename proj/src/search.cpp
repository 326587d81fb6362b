#include "spw/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spw/error.hpp"

namespace spw {

namespace {

constexpr size_t kLeafSize = 16;

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;
};

// Per-dimension mean and 1/std over the expert set; constant dimensions keep
// scale 1 so they still contribute raw deviations.
Standardizer fit_standardizer(const ExpertTransitionSet& expert) {
    const size_t dim = expert.point_dim();
    const size_t n = expert.count();
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.scale.assign(dim, 1.0);
    std::vector<double> sq(dim, 0.0);
    for (const auto& tr : expert.transitions) {
        const Vec p = tr.concat();
        for (size_t d = 0; d < dim; ++d) {
            s.mean[d] += p[d];
            sq[d] += p[d] * p[d];
        }
    }
    for (size_t d = 0; d < dim; ++d) {
        s.mean[d] /= static_cast<double>(n);
        const double var = sq[d] / static_cast<double>(n) - s.mean[d] * s.mean[d];
        const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
        if (sd > 0.0) s.scale[d] = 1.0 / sd;
    }
    return s;
}

void apply_standardizer(const Standardizer& s, std::vector<double>& point) {
    for (size_t d = 0; d < point.size(); ++d) point[d] = (point[d] - s.mean[d]) * s.scale[d];
}

void validate_query(const Transition& query, size_t dim) {
    if (query.state_dim() + query.action_dim() != dim)
        fail(ErrorCode::dimension_mismatch,
             "query dimension " + std::to_string(query.state_dim() + query.action_dim()) +
                 " does not match index dimension " + std::to_string(dim));
}

}  // namespace

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return acc;
}

NearestNeighborIndex NearestNeighborIndex::build(const ExpertTransitionSet& expert,
                                                 const IndexOptions& options) {
    if (expert.empty())
        fail(ErrorCode::empty_input, "cannot build an index over an empty expert set");

    NearestNeighborIndex index;
    index.count_ = expert.count();
    index.dim_ = expert.point_dim();
    index.options_ = options;

    Standardizer std_fit;
    if (options.standardize) {
        std_fit = fit_standardizer(expert);
        index.mean_ = std_fit.mean;
        index.scale_ = std_fit.scale;
    }

    index.points_.reserve(index.count_ * index.dim_);
    for (const auto& tr : expert.transitions) {
        check_dims(tr, expert.state_dim(), expert.action_dim(), "expert transition");
        Vec p = tr.concat();
        for (double x : p)
            if (!std::isfinite(x))
                fail(ErrorCode::numeric, "expert set contains a non-finite coordinate");
        if (options.standardize) apply_standardizer(std_fit, p);
        index.points_.insert(index.points_.end(), p.begin(), p.end());
    }

    index.order_.resize(index.count_);
    for (size_t i = 0; i < index.count_; ++i) index.order_[i] = i;
    index.build_node(0, index.count_);
    return index;
}

const double* NearestNeighborIndex::point(size_t ordered_index) const {
    return points_.data() + order_[ordered_index] * dim_;
}

int NearestNeighborIndex::build_node(size_t begin, size_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{});

    if (end - begin <= kLeafSize) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }

    // split on the dimension with the widest spread
    size_t split_dim = 0;
    double widest = -1.0;
    for (size_t d = 0; d < dim_; ++d) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (size_t i = begin; i < end; ++i) {
            const double x = point(i)[d];
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (hi - lo > widest) {
            widest = hi - lo;
            split_dim = d;
        }
    }

    const size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [this, split_dim](size_t a, size_t b) {
                         return points_[a * dim_ + split_dim] < points_[b * dim_ + split_dim];
                     });

    nodes_[id].split_dim = static_cast<int>(split_dim);
    nodes_[id].split_value = point(mid)[split_dim];
    const int left = build_node(begin, mid);
    const int right = build_node(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void NearestNeighborIndex::query_node(int node, std::span<const double> q,
                                      double& best_sq) const {
    const Node& n = nodes_[static_cast<size_t>(node)];
    if (n.split_dim < 0) {
        for (size_t i = n.begin; i < n.end; ++i) {
            const double sq = squared_distance(q, std::span<const double>(point(i), dim_));
            if (sq < best_sq) best_sq = sq;
        }
        return;
    }
    const double delta = q[static_cast<size_t>(n.split_dim)] - n.split_value;
    const int near = delta < 0.0 ? n.left : n.right;
    const int far = delta < 0.0 ? n.right : n.left;
    query_node(near, q, best_sq);
    if (delta * delta <= best_sq) query_node(far, q, best_sq);
}

double NearestNeighborIndex::nearest_distance(const Transition& query) const {
    validate_query(query, dim_);
    return nearest_distance(query.concat());
}

double NearestNeighborIndex::nearest_distance(std::span<const double> query) const {
    if (query.size() != dim_)
        fail(ErrorCode::dimension_mismatch,
             "query dimension " + std::to_string(query.size()) +
                 " does not match index dimension " + std::to_string(dim_));
    Vec transformed;
    std::span<const double> q = query;
    if (options_.standardize) {
        transformed.assign(query.begin(), query.end());
        for (size_t d = 0; d < dim_; ++d)
            transformed[d] = (transformed[d] - mean_[d]) * scale_[d];
        q = transformed;
    }
    double best_sq = std::numeric_limits<double>::infinity();
    query_node(0, q, best_sq);
    return std::sqrt(best_sq);
}

DistanceProfile NearestNeighborIndex::segment_distances(const Segment& segment) const {
    DistanceProfile profile;
    profile.reserve(segment.length());
    for (const auto& tr : segment.transitions) profile.push_back(nearest_distance(tr));
    return profile;
}

double brute_force_distance(const ExpertTransitionSet& expert, const Transition& query,
                            const IndexOptions& options) {
    if (expert.empty())
        fail(ErrorCode::empty_input, "cannot scan an empty expert set");
    validate_query(query, expert.point_dim());

    Standardizer std_fit;
    if (options.standardize) std_fit = fit_standardizer(expert);

    Vec q = query.concat();
    if (options.standardize) apply_standardizer(std_fit, q);

    double best_sq = std::numeric_limits<double>::infinity();
    for (const auto& tr : expert.transitions) {
        Vec p = tr.concat();
        if (options.standardize) apply_standardizer(std_fit, p);
        const double sq = squared_distance(q, p);
        if (sq < best_sq) best_sq = sq;
    }
    return std::sqrt(best_sq);
}

}  // namespace spw
