#pragma once

#include <map>
#include <string>
#include <vector>

#include "trackmine/track.hpp"

namespace trackmine {

struct ClearMotResult {
    double mota = 1.0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
    long matches = 0;
    long gt_boxes = 0;
    long pred_boxes = 0;
    double motp = 0.0;  ///< mean IoU of matched pairs
};

struct IdentityResult {
    double idf1 = 0.0;
    long idtp = 0;
    long idfp = 0;
    long idfn = 0;
};

/// CLEAR-MOT scoring. Per frame, pairings from the previous frame are kept
/// while their IoU stays at or above the threshold; the rest are matched by an
/// assignment that maximizes the number of matches, then their total IoU.
/// An ID switch is counted when a ground-truth identity is matched to a
/// different prediction id than at its last match. Matches at exactly the
/// threshold count. Throws std::invalid_argument on duplicate (id, frame) rows.
ClearMotResult evaluate_clearmot(const std::vector<Tracklet>& gt, const std::vector<Tracklet>& pred,
                                 double iou_threshold = 0.5);

/// IDF1 with an optimal one-to-one matching between ground-truth and
/// predicted identities that maximizes the number of co-located boxes.
IdentityResult evaluate_idf1(const std::vector<Tracklet>& gt, const std::vector<Tracklet>& pred,
                             double iou_threshold = 0.5);

struct SequenceReport {
    std::string name;
    ClearMotResult clear;
    IdentityResult identity;
};

struct EvalReport {
    double mota = 1.0;
    double idf1 = 0.0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
    long gt_boxes = 0;
    std::vector<SequenceReport> sequences;
};

SequenceReport evaluate_sequence(const std::string& name, const std::vector<Tracklet>& gt,
                                 const std::vector<Tracklet>& pred, double iou_threshold = 0.5);

/// Sums counts over sequences and recomputes MOTA and IDF1 from the totals.
EvalReport combine(std::vector<SequenceReport> sequences);

}  // namespace trackmine
