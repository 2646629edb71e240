#pragma once

#include <vector>

#include "trackmine/track.hpp"

namespace trackmine::testing {

/// Tracklet holding the same box on every frame in [first, last].
inline Tracklet still(int id, int first, int last, BoundingBox box, double fps = 30.0) {
    Tracklet t;
    t.id = id;
    t.fps = fps;
    for (int f = first; f <= last; ++f) t.points.push_back({f, box, false, 1.0});
    return t;
}

/// Tracklet moving by (vx, vy) pixels per frame from `box` at frame `first`.
inline Tracklet moving(int id, int first, int last, BoundingBox box, double vx, double vy,
                       double fps = 30.0) {
    Tracklet t;
    t.id = id;
    t.fps = fps;
    for (int f = first; f <= last; ++f) {
        const double k = f - first;
        t.points.push_back({f, BoundingBox(box.x() + vx * k, box.y() + vy * k, box.w(), box.h()), false, 1.0});
    }
    return t;
}

}  // namespace trackmine::testing
