#include "trackmine/track.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trackmine {

double Tracklet::mean_confidence() const {
    if (points.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& p : points) sum += p.confidence;
    return sum / static_cast<double>(points.size());
}

const TrackPoint* Tracklet::at(int frame) const {
    auto it = std::lower_bound(points.begin(), points.end(), frame,
                               [](const TrackPoint& p, int f) { return p.frame < f; });
    if (it == points.end() || it->frame != frame) return nullptr;
    return &*it;
}

void validate(const Tracklet& t) {
    const std::string who = "tracklet " + std::to_string(t.id);
    if (t.points.empty()) throw std::invalid_argument(who + ": no points");
    if (!(t.fps > 0.0) || !std::isfinite(t.fps))
        throw std::invalid_argument(who + ": fps must be positive");
    if (t.points.front().frame < 0) throw std::invalid_argument(who + ": negative frame");
    for (std::size_t k = 1; k < t.points.size(); ++k) {
        if (t.points[k].frame <= t.points[k - 1].frame)
            throw std::invalid_argument(who + ": frames not strictly increasing at frame " +
                                        std::to_string(t.points[k].frame));
    }
}

void sort_by_id(std::vector<Tracklet>& tracks) {
    std::stable_sort(tracks.begin(), tracks.end(),
                     [](const Tracklet& a, const Tracklet& b) { return a.id < b.id; });
}

}  // namespace trackmine
