#include "trackmine/rectify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "trackmine/assignment.hpp"

namespace trackmine {

void RectifyConfig::validate() const {
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("rectify: mu must be in [0, 1]");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("rectify: gamma must be positive");
    if (!(clip_padding >= 0.0)) throw std::invalid_argument("rectify: clip padding must be >= 0");
}

double time_gap(const Tracklet& a, const Tracklet& b) {
    return static_cast<double>(b.start_frame() - a.end_frame()) / a.fps;
}

std::optional<double> pair_cost(const Tracklet& a, const Tracklet& b, const RectifyConfig& cfg) {
    if (a.fps != b.fps)
        throw std::invalid_argument("pair_cost: tracklets " + std::to_string(a.id) + " and " +
                                    std::to_string(b.id) + " have different fps");
    if (b.start_frame() <= a.end_frame()) return std::nullopt;
    const double gap = time_gap(a, b);
    if (gap > cfg.gamma) return std::nullopt;
    const double tiou = iou(a.last_box(), b.first_box());
    if (tiou < cfg.mu) return std::nullopt;
    return tiou + (1.0 - gap / cfg.gamma);
}

std::vector<MatchCandidate> enumerate_candidates(const std::vector<Tracklet>& tracklets,
                                                 const RectifyConfig& cfg) {
    std::vector<MatchCandidate> out;
    if (tracklets.empty()) return out;
    const double fps = tracklets.front().fps;
    for (const auto& t : tracklets) {
        if (t.fps != fps) throw std::invalid_argument("rectify: tracklets must share one fps");
    }

    // Only tracklets starting within gamma seconds after `a` ends can pair with it.
    std::vector<int> by_start(tracklets.size());
    std::iota(by_start.begin(), by_start.end(), 0);
    std::stable_sort(by_start.begin(), by_start.end(), [&](int l, int r) {
        return tracklets[l].start_frame() < tracklets[r].start_frame();
    });
    const int max_gap_frames = static_cast<int>(std::floor(cfg.gamma * fps)) + 1;

    for (int i = 0; i < static_cast<int>(tracklets.size()); ++i) {
        const auto& a = tracklets[i];
        auto it = std::upper_bound(by_start.begin(), by_start.end(), a.end_frame(),
                                   [&](int frame, int k) { return frame < tracklets[k].start_frame(); });
        for (; it != by_start.end(); ++it) {
            const auto& b = tracklets[*it];
            if (b.start_frame() - a.end_frame() > max_gap_frames) break;
            if (auto c = pair_cost(a, b, cfg)) {
                out.push_back({i, *it, *c, iou(a.last_box(), b.first_box()), time_gap(a, b)});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const MatchCandidate& l, const MatchCandidate& r) {
        return std::pair(l.i, l.j) < std::pair(r.i, r.j);
    });
    return out;
}

double canonical_total(std::vector<MatchCandidate> joins) {
    std::sort(joins.begin(), joins.end(), [](const MatchCandidate& l, const MatchCandidate& r) {
        return std::pair(l.i, l.j) < std::pair(r.i, r.j);
    });
    double total = 0.0;
    for (const auto& j : joins) total += j.cost;
    return total;
}

JoinSet solve_matching(const std::vector<Tracklet>& tracklets, const RectifyConfig& cfg) {
    cfg.validate();
    const auto candidates = enumerate_candidates(tracklets, cfg);
    const int n = static_cast<int>(tracklets.size());

    std::vector<WeightedEdge> edges;
    edges.reserve(candidates.size());
    for (const auto& c : candidates) edges.push_back({c.i, c.j, c.cost});
    const auto pairs = max_weight_matching(n, n, edges);

    JoinSet result;
    for (const auto& [i, j] : pairs) {
        auto it = std::lower_bound(candidates.begin(), candidates.end(), std::pair(i, j),
                                   [](const MatchCandidate& c, const std::pair<int, int>& key) {
                                       return std::pair(c.i, c.j) < key;
                                   });
        result.joins.push_back(*it);
    }
    result.total_cost = canonical_total(result.joins);
    return result;
}

Tracklet join_tracklets(const Tracklet& earlier, const Tracklet& later, bool interpolate) {
    if (later.start_frame() <= earlier.end_frame())
        throw std::invalid_argument("join_tracklets: later tracklet must start after earlier ends");
    Tracklet out = earlier;
    const auto& a = earlier.last_box();
    const auto& b = later.first_box();
    const int f0 = earlier.end_frame();
    const int f1 = later.start_frame();
    if (interpolate) {
        for (int f = f0 + 1; f < f1; ++f) {
            const double s = static_cast<double>(f - f0) / static_cast<double>(f1 - f0);
            const auto lerp = [s](double p, double q) { return p + (q - p) * s; };
            TrackPoint p;
            p.frame = f;
            p.box = BoundingBox::from_center(lerp(a.cx(), b.cx()), lerp(a.cy(), b.cy()),
                                             lerp(a.w(), b.w()), lerp(a.h(), b.h()));
            p.interpolated = true;
            p.confidence = std::min(earlier.points.back().confidence, later.points.front().confidence);
            out.points.push_back(p);
        }
    }
    out.points.insert(out.points.end(), later.points.begin(), later.points.end());
    return out;
}

RectifyResult rectify(std::vector<Tracklet> tracklets, const RectifyConfig& cfg,
                      const std::string& video_id) {
    cfg.validate();
    for (const auto& t : tracklets) validate(t);
    if (cfg.min_confidence) {
        std::erase_if(tracklets,
                      [&](const Tracklet& t) { return t.mean_confidence() < *cfg.min_confidence; });
    }

    RectifyResult result;
    result.log.video_id = video_id;
    result.log.fps = tracklets.empty() ? 30.0 : tracklets.front().fps;

    while (true) {
        ++result.log.iterations;
        const int iteration = result.log.iterations;
        const auto solved = solve_matching(tracklets, cfg);
        if (solved.joins.empty()) break;

        const int n = static_cast<int>(tracklets.size());
        std::vector<int> next(n, -1), prev(n, -1);
        std::vector<const MatchCandidate*> join_of(n, nullptr);
        for (const auto& j : solved.joins) {
            next[j.i] = j.j;
            prev[j.j] = j.i;
            join_of[j.i] = &j;
        }

        // Chains are acyclic because every join goes strictly forward in time.
        std::vector<Tracklet> merged;
        merged.reserve(n - solved.joins.size());
        for (int head = 0; head < n; ++head) {
            if (prev[head] != -1) continue;
            Tracklet acc = tracklets[head];
            for (int cur = head; next[cur] != -1; cur = next[cur]) {
                const auto& piece = tracklets[cur];
                const auto& succ = tracklets[next[cur]];
                const auto* cand = join_of[cur];
                result.log.joins.push_back(MergeJoin{
                    iteration,
                    piece.id,
                    succ.id,
                    {piece.start_frame(), piece.end_frame()},
                    {succ.start_frame(), succ.end_frame()},
                    {piece.end_frame() + 1, succ.start_frame() - 1},
                    cand->cost,
                    cand->tiou,
                });
                acc = join_tracklets(acc, succ, cfg.interpolate_gaps);
            }
            merged.push_back(std::move(acc));
        }
        tracklets = std::move(merged);
    }
    result.tracks = std::move(tracklets);
    return result;
}

std::vector<HardClip> mine_hard_examples(const MergeLog& log, FrameSpan video_extent,
                                         const RectifyConfig& cfg) {
    const int pad = static_cast<int>(std::lround(cfg.clip_padding * log.fps));
    std::vector<HardClip> clips;
    for (const auto& j : log.joins) {
        HardClip c;
        c.video_id = log.video_id;
        c.start_frame = std::max(video_extent.first, j.earlier.first - pad);
        c.end_frame = std::min(video_extent.last, j.later.last + pad);
        c.track_ids = {j.earlier_id, j.later_id};
        c.gap_spans = {j.gap};
        clips.push_back(std::move(c));
    }
    std::sort(clips.begin(), clips.end(), [](const HardClip& l, const HardClip& r) {
        return std::pair(l.start_frame, l.end_frame) < std::pair(r.start_frame, r.end_frame);
    });

    std::vector<HardClip> merged;
    for (auto& c : clips) {
        if (!merged.empty() && c.start_frame <= merged.back().end_frame) {
            auto& m = merged.back();
            m.end_frame = std::max(m.end_frame, c.end_frame);
            m.track_ids.insert(m.track_ids.end(), c.track_ids.begin(), c.track_ids.end());
            m.gap_spans.insert(m.gap_spans.end(), c.gap_spans.begin(), c.gap_spans.end());
        } else {
            merged.push_back(std::move(c));
        }
    }
    for (auto& m : merged) {
        std::sort(m.track_ids.begin(), m.track_ids.end());
        m.track_ids.erase(std::unique(m.track_ids.begin(), m.track_ids.end()), m.track_ids.end());
        std::sort(m.gap_spans.begin(), m.gap_spans.end(),
                  [](const FrameSpan& l, const FrameSpan& r) { return l.first < r.first; });
        m.gap_spans.erase(std::unique(m.gap_spans.begin(), m.gap_spans.end()), m.gap_spans.end());
    }
    return merged;
}

}  // namespace trackmine
