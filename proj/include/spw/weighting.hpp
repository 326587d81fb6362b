#pragma once

#include <string>

#include "spw/search.hpp"
#include "spw/types.hpp"

namespace spw {

/// Softmax temperature. Infinity is a distinct case, not a large float, so
/// the uniform limit is exact and the uniform-weight baseline reduces to it
/// bit for bit.
class Temperature {
public:
    static Temperature finite(double value);
    static Temperature infinity();
    static Temperature parse(const std::string& text);

    bool is_infinite() const { return infinite_; }
    double value() const;
    std::string str() const;

private:
    Temperature(double value, bool infinite) : value_(value), infinite_(infinite) {}

    double value_ = 1.0;
    bool infinite_ = false;
};

/// Segment plus its simplex of per-step importance weights.
struct WeightedSegment {
    Segment segment;
    Vec weights;
    Temperature tau = Temperature::infinity();
};

/// w_t = exp(-d_t / tau) / sum_t' exp(-d_t' / tau), computed with the
/// minimum distance subtracted so extreme profiles cannot overflow.
/// tau = infinity returns exactly 1/H per step.
Vec extract_weights(const DistanceProfile& distances, Temperature tau);

/// segment_distances followed by extract_weights.
WeightedSegment weight_segment(const NearestNeighborIndex& index, const Segment& segment,
                               Temperature tau);

/// Uniform 1/H weights (the unweighted baseline's path).
WeightedSegment uniform_weighted(const Segment& segment);

}  // namespace spw
