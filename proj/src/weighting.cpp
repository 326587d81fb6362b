#include "spw/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spw/error.hpp"

namespace spw {

Temperature Temperature::finite(double value) {
    if (!std::isfinite(value) || value <= 0.0)
        fail(ErrorCode::invalid_argument, "temperature must be a positive finite value");
    return Temperature(value, false);
}

Temperature Temperature::infinity() { return Temperature(0.0, true); }

Temperature Temperature::parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
    std::istringstream in(text);
    double v = 0.0;
    in >> v;
    if (!in || !in.eof())
        fail(ErrorCode::parse, "cannot parse temperature '" + text + "'");
    return finite(v);
}

double Temperature::value() const {
    if (infinite_)
        fail(ErrorCode::invalid_argument, "infinite temperature has no finite value");
    return value_;
}

std::string Temperature::str() const {
    if (infinite_) return "inf";
    std::ostringstream out;
    out << value_;
    return out.str();
}

Vec extract_weights(const DistanceProfile& distances, Temperature tau) {
    if (distances.empty())
        fail(ErrorCode::empty_input, "cannot weight an empty distance profile");
    const size_t h = distances.size();
    for (double d : distances)
        if (!std::isfinite(d))
            fail(ErrorCode::numeric, "distance profile contains a non-finite entry");

    if (tau.is_infinite()) return Vec(h, 1.0 / static_cast<double>(h));

    const double t = tau.value();
    const double d_min = *std::min_element(distances.begin(), distances.end());
    Vec weights(h);
    double total = 0.0;
    for (size_t i = 0; i < h; ++i) {
        weights[i] = std::exp(-(distances[i] - d_min) / t);
        total += weights[i];
    }
    // total >= 1 because the minimum maps to exp(0)
    for (double& w : weights) w /= total;
    return weights;
}

WeightedSegment weight_segment(const NearestNeighborIndex& index, const Segment& segment,
                               Temperature tau) {
    DistanceProfile distances = index.segment_distances(segment);
    return WeightedSegment{segment, extract_weights(distances, tau), tau};
}

WeightedSegment uniform_weighted(const Segment& segment) {
    if (segment.length() == 0) fail(ErrorCode::empty_input, "cannot weight an empty segment");
    return WeightedSegment{segment, Vec(segment.length(), 1.0 / segment.length()),
                           Temperature::infinity()};
}

}  // namespace spw
