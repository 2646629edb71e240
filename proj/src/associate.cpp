#include "trackmine/associate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace trackmine {

void AssocConfig::validate() const {
    const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(vis_keep) || !unit(match_iou) || !unit(spawn_conf))
        throw std::invalid_argument("associate: thresholds must lie in [0, 1]");
    if (!(fps > 0.0)) throw std::invalid_argument("associate: fps must be positive");
}

TrackDetectionPairs GreedyIouMatcher::match(std::span<const PredictionRecord> predictions,
                                            std::span<const DetectionRecord> detections,
                                            double min_iou) const {
    struct Scored {
        double overlap;
        int detection;
        int track_id;
    };
    std::vector<Scored> scored;
    for (const auto& p : predictions) {
        for (int d = 0; d < static_cast<int>(detections.size()); ++d) {
            const double overlap = iou(p.box, detections[d].box);
            if (overlap >= min_iou) scored.push_back({overlap, d, p.track_id});
        }
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& l, const Scored& r) {
        if (l.overlap != r.overlap) return l.overlap > r.overlap;
        return std::tie(l.detection, l.track_id) < std::tie(r.detection, r.track_id);
    });

    std::vector<char> det_used(detections.size(), 0);
    std::vector<int> tracks_used;
    TrackDetectionPairs out;
    for (const auto& s : scored) {
        if (det_used[s.detection]) continue;
        if (std::find(tracks_used.begin(), tracks_used.end(), s.track_id) != tracks_used.end()) continue;
        det_used[s.detection] = 1;
        tracks_used.push_back(s.track_id);
        out.emplace_back(s.track_id, s.detection);
    }
    return out;
}

namespace {

void terminate(AssocState& state, int id) {
    auto node = state.live.extract(id);
    state.finished.push_back(std::move(node.mapped()));
}

}  // namespace

std::vector<AssocEvent> associate_step(AssocState& state, int frame,
                                       std::span<const DetectionRecord> detections,
                                       std::span<const PredictionRecord> predictions,
                                       const AssocConfig& cfg, const Matcher& matcher) {
    if (frame <= state.last_frame)
        throw std::invalid_argument("associate: frame " + std::to_string(frame) +
                                    " does not advance past " + std::to_string(state.last_frame));
    std::map<int, const PredictionRecord*> pred_of;
    for (const auto& p : predictions) {
        if (!state.live.count(p.track_id))
            throw std::invalid_argument("associate: prediction for unknown track " +
                                        std::to_string(p.track_id));
        if (!pred_of.emplace(p.track_id, &p).second)
            throw std::invalid_argument("associate: duplicate prediction for track " +
                                        std::to_string(p.track_id));
        if (!(p.visibility >= 0.0 && p.visibility <= 1.0))
            throw std::invalid_argument("associate: visibility outside [0, 1]");
    }
    state.last_frame = frame;

    std::vector<AssocEvent> events;
    std::vector<PredictionRecord> survivors;
    std::vector<int> to_terminate;
    for (const auto& [id, track] : state.live) {
        auto it = pred_of.find(id);
        if (it == pred_of.end()) {
            events.push_back({EventKind::terminated, id, frame, -1, TerminateReason::no_prediction});
            to_terminate.push_back(id);
        } else if (it->second->visibility < cfg.vis_keep) {
            events.push_back({EventKind::terminated, id, frame, -1, TerminateReason::low_visibility});
            to_terminate.push_back(id);
        } else {
            survivors.push_back(*it->second);
        }
    }

    const auto pairs = matcher.match(survivors, detections, cfg.match_iou);
    std::vector<char> det_used(detections.size(), 0);
    std::map<int, int> matched;
    for (const auto& [id, d] : pairs) {
        matched.emplace(id, d);
        det_used[d] = 1;
    }
    for (const auto& p : survivors) {
        auto it = matched.find(p.track_id);
        if (it == matched.end()) {
            events.push_back({EventKind::terminated, p.track_id, frame, -1, TerminateReason::unmatched});
            to_terminate.push_back(p.track_id);
            continue;
        }
        const auto& det = detections[it->second];
        state.live.at(p.track_id).points.push_back({frame, det.box, false, det.confidence});
        events.push_back({EventKind::continued, p.track_id, frame, it->second, TerminateReason::none});
    }
    std::sort(to_terminate.begin(), to_terminate.end());
    for (int id : to_terminate) terminate(state, id);

    for (int d = 0; d < static_cast<int>(detections.size()); ++d) {
        if (det_used[d] || detections[d].confidence < cfg.spawn_conf) continue;
        Tracklet t;
        t.id = state.next_id++;
        t.fps = cfg.fps;
        t.points.push_back({frame, detections[d].box, false, detections[d].confidence});
        state.live.emplace(t.id, std::move(t));
        events.push_back({EventKind::spawned, state.next_id - 1, frame, d, TerminateReason::none});
    }
    return events;
}

std::vector<PredictionRecord> IdentityPredictor::predict(const AssocState& state, int frame) {
    std::vector<PredictionRecord> out;
    for (const auto& [id, t] : state.live) out.push_back({id, frame, t.last_box(), 1.0});
    return out;
}

std::vector<PredictionRecord> ConstantVelocityPredictor::predict(const AssocState& state, int frame) {
    std::vector<PredictionRecord> out;
    for (const auto& [id, t] : state.live) {
        const auto& last = t.points.back();
        if (t.points.size() < 2) {
            out.push_back({id, frame, last.box, 1.0});
            continue;
        }
        const auto& prev = t.points[t.points.size() - 2];
        const double steps = static_cast<double>(frame - last.frame) / (last.frame - prev.frame);
        const auto& a = prev.box;
        const auto& b = last.box;
        const double w = std::max(b.w() + (b.w() - a.w()) * steps, 1e-3);
        const double h = std::max(b.h() + (b.h() - a.h()) * steps, 1e-3);
        out.push_back({id, frame,
                       BoundingBox::from_center(b.cx() + (b.cx() - a.cx()) * steps,
                                                b.cy() + (b.cy() - a.cy()) * steps, w, h),
                       1.0});
    }
    return out;
}

RecordedPredictor::RecordedPredictor(std::vector<PredictionRecord> records) {
    for (auto& r : records) by_frame_.emplace(r.frame, r);
}

std::vector<PredictionRecord> RecordedPredictor::predict(const AssocState&, int frame) {
    std::vector<PredictionRecord> out;
    auto [lo, hi] = by_frame_.equal_range(frame);
    for (auto it = lo; it != hi; ++it) out.push_back(it->second);
    return out;
}

std::vector<FrameDetections> group_by_frame(std::span<const DetectionRecord> detections) {
    std::map<int, std::vector<DetectionRecord>> grouped;
    for (const auto& d : detections) grouped[d.frame].push_back(d);
    std::vector<FrameDetections> out;
    for (auto& [frame, dets] : grouped) out.push_back({frame, std::move(dets)});
    return out;
}

std::vector<Tracklet> run_association(std::span<const FrameDetections> frames,
                                      Predictor& predictor, const AssocConfig& cfg,
                                      const Matcher& matcher) {
    cfg.validate();
    for (std::size_t k = 1; k < frames.size(); ++k) {
        if (frames[k].frame <= frames[k - 1].frame)
            throw std::invalid_argument("associate: frames out of order at frame " +
                                        std::to_string(frames[k].frame));
    }
    AssocState state;
    if (frames.empty()) return {};

    std::size_t next = 0;
    const std::vector<DetectionRecord> none;
    for (int f = frames.front().frame; f <= frames.back().frame; ++f) {
        const auto& dets = (next < frames.size() && frames[next].frame == f) ? frames[next++].detections
                                                                            : none;
        const auto preds = predictor.predict(state, f);
        associate_step(state, f, dets, preds, cfg, matcher);
    }
    for (auto& [id, t] : state.live) state.finished.push_back(std::move(t));
    state.live.clear();
    sort_by_id(state.finished);
    return std::move(state.finished);
}

}  // namespace trackmine
