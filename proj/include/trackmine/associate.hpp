#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "trackmine/track.hpp"

namespace trackmine {

struct DetectionRecord {
    int frame = 0;
    BoundingBox box;
    double confidence = 1.0;
};

/// Motion-model output for one live track at one frame: where the track is
/// expected to be and how likely it is to still be visible.
struct PredictionRecord {
    int track_id = 0;
    int frame = 0;
    BoundingBox box;
    double visibility = 1.0;
};

struct AssocConfig {
    double vis_keep = 0.3;    ///< tracks below this visibility terminate
    double match_iou = 0.5;   ///< minimum IoU between prediction and detection
    double spawn_conf = 0.5;  ///< minimum confidence to start a new track
    double fps = 30.0;

    void validate() const;
};

enum class EventKind { continued, terminated, spawned };
enum class TerminateReason { none, low_visibility, unmatched, no_prediction };

struct AssocEvent {
    EventKind kind = EventKind::continued;
    int track_id = 0;
    int frame = 0;
    int detection = -1;  ///< index into the frame's detections, -1 if none
    TerminateReason reason = TerminateReason::none;
};

/// Live and finished tracks. Ids start at 1 and are never reused.
struct AssocState {
    int next_id = 1;
    int last_frame = -1;
    std::map<int, Tracklet> live;
    std::vector<Tracklet> finished;
};

/// Pairs of (track id, detection index) accepted by a matcher.
using TrackDetectionPairs = std::vector<std::pair<int, int>>;

/// Strategy for pairing surviving predictions with detections.
class Matcher {
public:
    virtual ~Matcher() = default;
    virtual TrackDetectionPairs match(std::span<const PredictionRecord> predictions,
                                      std::span<const DetectionRecord> detections,
                                      double min_iou) const = 0;
};

/// Repeatedly takes the highest-IoU (prediction, detection) pair at or above
/// the threshold. Equal IoUs go to the earlier detection, then the smaller track id.
class GreedyIouMatcher final : public Matcher {
public:
    TrackDetectionPairs match(std::span<const PredictionRecord> predictions,
                              std::span<const DetectionRecord> detections,
                              double min_iou) const override;
};

/// Applies one frame of the online rules:
///   1. tracks with visibility below vis_keep (or without a prediction) terminate;
///   2. survivors are matched to detections with IoU >= match_iou and continue
///      at the detection box, unmatched survivors terminate;
///   3. unmatched detections with confidence >= spawn_conf start new tracks.
/// Throws std::invalid_argument on a prediction for an unknown track or a
/// frame that does not advance.
std::vector<AssocEvent> associate_step(AssocState& state, int frame,
                                       std::span<const DetectionRecord> detections,
                                       std::span<const PredictionRecord> predictions,
                                       const AssocConfig& cfg,
                                       const Matcher& matcher = GreedyIouMatcher{});

/// Source of per-frame predictions for the live tracks.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual std::vector<PredictionRecord> predict(const AssocState& state, int frame) = 0;
};

/// Predicts each track stays at its last box with full visibility.
class IdentityPredictor final : public Predictor {
public:
    std::vector<PredictionRecord> predict(const AssocState& state, int frame) override;
};

/// Extrapolates the last two boxes linearly, full visibility.
class ConstantVelocityPredictor final : public Predictor {
public:
    std::vector<PredictionRecord> predict(const AssocState& state, int frame) override;
};

/// Replays externally produced prediction records keyed by frame.
class RecordedPredictor final : public Predictor {
public:
    explicit RecordedPredictor(std::vector<PredictionRecord> records);
    std::vector<PredictionRecord> predict(const AssocState& state, int frame) override;

private:
    std::multimap<int, PredictionRecord> by_frame_;
};

struct FrameDetections {
    int frame = 0;
    std::vector<DetectionRecord> detections;
};

/// Folds associate_step over frames in increasing order. Frames missing from
/// the input between the first and last given frame are processed as empty.
/// Throws std::invalid_argument when frames are not strictly increasing.
std::vector<Tracklet> run_association(std::span<const FrameDetections> frames,
                                      Predictor& predictor, const AssocConfig& cfg,
                                      const Matcher& matcher = GreedyIouMatcher{});

/// Groups detection records by frame, preserving file order within a frame.
std::vector<FrameDetections> group_by_frame(std::span<const DetectionRecord> detections);

}  // namespace trackmine
