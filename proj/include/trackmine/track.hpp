#pragma once

#include <vector>

#include "trackmine/geometry.hpp"

namespace trackmine {

struct TrackPoint {
    int frame = 0;  // 0-based
    BoundingBox box;
    bool interpolated = false;
    double confidence = 1.0;

    friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

/// One identity's boxes over time. Points are kept sorted by frame with at
/// most one point per frame; fps is required because gaps are measured in seconds.
struct Tracklet {
    int id = 0;
    std::vector<TrackPoint> points;
    double fps = 30.0;

    int start_frame() const { return points.front().frame; }
    int end_frame() const { return points.back().frame; }
    const BoundingBox& first_box() const { return points.front().box; }
    const BoundingBox& last_box() const { return points.back().box; }
    double mean_confidence() const;

    /// Point at `frame`, or nullptr.
    const TrackPoint* at(int frame) const;

    friend bool operator==(const Tracklet&, const Tracklet&) = default;
};

/// Throws std::invalid_argument if the tracklet is empty, unsorted, has
/// duplicate frames, negative frames or non-positive fps.
void validate(const Tracklet& t);

/// Sorts tracklets by id; used to give file round trips a canonical order.
void sort_by_id(std::vector<Tracklet>& tracks);

}  // namespace trackmine
