#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trackmine/track.hpp"

namespace trackmine {

struct RectifyConfig {
    double mu = 0.1;     ///< minimum endpoint IoU between joined tracklets
    double gamma = 0.5;  ///< maximum time gap between joined tracklets, seconds
    bool interpolate_gaps = true;
    double clip_padding = 0.5;  ///< seconds added on both sides of a mined clip
    /// Tracklets whose mean confidence is below this are dropped before
    /// rectification. Off when unset.
    std::optional<double> min_confidence;

    void validate() const;
};

/// A valid join candidate: tracklet `i` ends strictly before tracklet `j` starts.
struct MatchCandidate {
    int i = 0;
    int j = 0;
    double cost = 0.0;
    double tiou = 0.0;
    double gap = 0.0;  ///< seconds
};

/// Time between the last point of `a` and the first point of `b`, seconds.
double time_gap(const Tracklet& a, const Tracklet& b);

/// Join score tIoU + (1 - gap / gamma), or nullopt when the pair is invalid:
/// endpoint IoU below mu, gap above gamma, or `b` not starting strictly after
/// `a` ends. Throws std::invalid_argument when the fps values differ.
std::optional<double> pair_cost(const Tracklet& a, const Tracklet& b, const RectifyConfig& cfg);

/// All valid candidates among `tracklets`, sorted by (i, j).
std::vector<MatchCandidate> enumerate_candidates(const std::vector<Tracklet>& tracklets,
                                                 const RectifyConfig& cfg);

/// Accepted joins (i, j) maximizing total cost subject to every tracklet
/// being joined to at most one later and at most one earlier tracklet.
struct JoinSet {
    std::vector<MatchCandidate> joins;
    double total_cost = 0.0;  ///< summed in (i, j) order
};

JoinSet solve_matching(const std::vector<Tracklet>& tracklets, const RectifyConfig& cfg);

/// Sum of costs in (i, j) order; both solvers report totals this way so
/// equal join sets give bit-identical totals.
double canonical_total(std::vector<MatchCandidate> joins);

struct FrameSpan {
    int first = 0;  ///< inclusive
    int last = 0;   ///< inclusive; last < first denotes an empty span

    friend bool operator==(const FrameSpan&, const FrameSpan&) = default;
};

struct MergeJoin {
    int iteration = 0;  ///< 1-based
    int earlier_id = 0;
    int later_id = 0;
    FrameSpan earlier;  ///< extent of the earlier track when joined
    FrameSpan later;    ///< extent of the later track when joined
    FrameSpan gap;      ///< frames strictly between the two
    double cost = 0.0;
    double tiou = 0.0;
};

struct MergeLog {
    std::string video_id;
    double fps = 30.0;
    std::vector<MergeJoin> joins;
    int iterations = 0;  ///< solve rounds, including the final one that found nothing
};

struct RectifyResult {
    std::vector<Tracklet> tracks;
    MergeLog log;
};

/// Repeats solve_matching and merging until a round accepts no join.
/// Merged tracks keep the identity of their earliest piece; gap frames are
/// filled by linear interpolation of center and size when enabled.
RectifyResult rectify(std::vector<Tracklet> tracklets, const RectifyConfig& cfg,
                      const std::string& video_id = {});

/// Joins `later` onto the end of `earlier`, optionally filling the gap.
Tracklet join_tracklets(const Tracklet& earlier, const Tracklet& later, bool interpolate);

struct HardClip {
    std::string video_id;
    int start_frame = 0;  ///< inclusive
    int end_frame = 0;    ///< inclusive
    std::vector<int> track_ids;
    std::vector<FrameSpan> gap_spans;
};

/// One clip per join covering both tracklets plus padding, clamped to
/// `video_extent`; overlapping clips are merged.
std::vector<HardClip> mine_hard_examples(const MergeLog& log, FrameSpan video_extent,
                                         const RectifyConfig& cfg);

}  // namespace trackmine
