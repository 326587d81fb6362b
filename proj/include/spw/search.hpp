#pragma once

#include <span>
#include <vector>

#include "spw/types.hpp"

namespace spw {

enum class Metric { euclidean };

struct IndexOptions {
    Metric metric = Metric::euclidean;
    /// z-score each dimension using expert statistics before measuring
    /// distances. Off by default: distances are taken on the raw
    /// state||action concatenation.
    bool standardize = false;
};

/// Per-step nearest-expert distances of a segment.
using DistanceProfile = std::vector<double>;

/// Exact nearest-neighbor index over the pooled expert transitions.
/// Immutable after build; concurrent read-only queries are safe. Queries are
/// exact: every result equals the brute-force scan over the stored points,
/// computed with the same distance kernel.
class NearestNeighborIndex {
public:
    static NearestNeighborIndex build(const ExpertTransitionSet& expert,
                                      const IndexOptions& options = {});

    size_t size() const { return count_; }
    size_t dim() const { return dim_; }
    const IndexOptions& options() const { return options_; }

    double nearest_distance(const Transition& query) const;
    double nearest_distance(std::span<const double> query) const;
    DistanceProfile segment_distances(const Segment& segment) const;

private:
    struct Node {
        int split_dim = -1;   // -1 marks a leaf
        double split_value = 0.0;
        int left = -1;
        int right = -1;
        size_t begin = 0;  // leaf range into order_
        size_t end = 0;
    };

    NearestNeighborIndex() = default;

    int build_node(size_t begin, size_t end);
    void query_node(int node, std::span<const double> q, double& best_sq) const;
    const double* point(size_t ordered_index) const;

    size_t count_ = 0;
    size_t dim_ = 0;
    IndexOptions options_;
    std::vector<double> points_;   // count_ x dim_, standardized when enabled
    std::vector<size_t> order_;    // permutation referenced by leaves
    std::vector<Node> nodes_;
    std::vector<double> mean_;     // standardization transform
    std::vector<double> scale_;
};

/// Linear-scan reference for nearest_distance; the verification oracle for
/// the tree. Shares the distance kernel so results match bit for bit.
double brute_force_distance(const ExpertTransitionSet& expert, const Transition& query,
                            const IndexOptions& options = {});

/// Squared Euclidean distance with a fixed summation order.
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace spw
