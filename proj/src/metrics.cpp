#include "trackmine/metrics.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "trackmine/assignment.hpp"

namespace trackmine {

namespace {

struct Observation {
    int id;
    BoundingBox box;
};

using FrameTable = std::map<int, std::vector<Observation>>;

// Flattens tracks into per-frame observations sorted by id, rejecting
// repeated (id, frame) rows even when split across tracklets.
FrameTable by_frame(const std::vector<Tracklet>& tracks, const char* side) {
    FrameTable table;
    std::set<std::pair<int, int>> seen;
    for (const auto& t : tracks) {
        for (const auto& p : t.points) {
            if (!seen.emplace(t.id, p.frame).second)
                throw std::invalid_argument(std::string("evaluate: duplicate ") + side + " row for id " +
                                            std::to_string(t.id) + " at frame " +
                                            std::to_string(p.frame));
            table[p.frame].push_back({t.id, p.box});
        }
    }
    for (auto& [f, obs] : table)
        std::sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) { return a.id < b.id; });
    return table;
}

long count_boxes(const FrameTable& t) {
    long n = 0;
    for (const auto& [f, obs] : t) n += static_cast<long>(obs.size());
    return n;
}

}  // namespace

ClearMotResult evaluate_clearmot(const std::vector<Tracklet>& gt, const std::vector<Tracklet>& pred,
                                 double iou_threshold) {
    const auto gt_table = by_frame(gt, "ground-truth");
    const auto pred_table = by_frame(pred, "prediction");

    ClearMotResult r;
    r.gt_boxes = count_boxes(gt_table);
    r.pred_boxes = count_boxes(pred_table);

    std::set<int> frames;
    for (const auto& [f, _] : gt_table) frames.insert(f);
    for (const auto& [f, _] : pred_table) frames.insert(f);

    const std::vector<Observation> empty;
    std::map<int, int> last_match;  // gt id -> pred id of its most recent match
    double iou_sum = 0.0;

    for (int f : frames) {
        const auto git = gt_table.find(f);
        const auto pit = pred_table.find(f);
        const auto& gts = git == gt_table.end() ? empty : git->second;
        const auto& preds = pit == pred_table.end() ? empty : pit->second;

        std::vector<char> gt_done(gts.size(), 0), pred_done(preds.size(), 0);
        std::vector<std::pair<int, int>> frame_matches;  // (gt index, pred index)

        // Keep previous pairings that still overlap enough.
        for (std::size_t g = 0; g < gts.size(); ++g) {
            auto lm = last_match.find(gts[g].id);
            if (lm == last_match.end()) continue;
            for (std::size_t p = 0; p < preds.size(); ++p) {
                if (pred_done[p] || preds[p].id != lm->second) continue;
                if (iou(gts[g].box, preds[p].box) >= iou_threshold) {
                    gt_done[g] = pred_done[p] = 1;
                    frame_matches.emplace_back(static_cast<int>(g), static_cast<int>(p));
                }
                break;
            }
        }

        // Assignment for the rest: match count first, total IoU second.
        const double base = static_cast<double>(gts.size() + preds.size() + 1);
        std::vector<WeightedEdge> edges;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (gt_done[g]) continue;
            for (std::size_t p = 0; p < preds.size(); ++p) {
                if (pred_done[p]) continue;
                const double overlap = iou(gts[g].box, preds[p].box);
                if (overlap >= iou_threshold)
                    edges.push_back({static_cast<int>(g), static_cast<int>(p), base + overlap});
            }
        }
        for (const auto& [g, p] : max_weight_matching(static_cast<int>(gts.size()),
                                                      static_cast<int>(preds.size()), edges)) {
            gt_done[g] = pred_done[p] = 1;
            frame_matches.emplace_back(g, p);
            auto lm = last_match.find(gts[g].id);
            if (lm != last_match.end() && lm->second != preds[p].id) ++r.idsw;
        }

        for (const auto& [g, p] : frame_matches) {
            last_match[gts[g].id] = preds[p].id;
            iou_sum += iou(gts[g].box, preds[p].box);
        }
        r.matches += static_cast<long>(frame_matches.size());
        r.fn += static_cast<long>(std::count(gt_done.begin(), gt_done.end(), 0));
        r.fp += static_cast<long>(std::count(pred_done.begin(), pred_done.end(), 0));
    }

    const long errors = r.fp + r.fn + r.idsw;
    // With no ground truth MOTA is undefined; treat the denominator as 1.
    r.mota = 1.0 - static_cast<double>(errors) / static_cast<double>(std::max(r.gt_boxes, 1L));
    r.motp = r.matches > 0 ? iou_sum / static_cast<double>(r.matches) : 0.0;
    return r;
}

IdentityResult evaluate_idf1(const std::vector<Tracklet>& gt, const std::vector<Tracklet>& pred,
                             double iou_threshold) {
    const auto gt_table = by_frame(gt, "ground-truth");
    const auto pred_table = by_frame(pred, "prediction");
    const long n_gt = count_boxes(gt_table);
    const long n_pred = count_boxes(pred_table);

    std::map<int, int> gt_index, pred_index;
    for (const auto& [f, obs] : gt_table)
        for (const auto& o : obs) gt_index.emplace(o.id, 0);
    for (const auto& [f, obs] : pred_table)
        for (const auto& o : obs) pred_index.emplace(o.id, 0);
    int k = 0;
    for (auto& [id, idx] : gt_index) idx = k++;
    k = 0;
    for (auto& [id, idx] : pred_index) idx = k++;

    std::map<std::pair<int, int>, long> overlap_count;
    for (const auto& [f, gts] : gt_table) {
        auto pit = pred_table.find(f);
        if (pit == pred_table.end()) continue;
        for (const auto& g : gts)
            for (const auto& p : pit->second)
                if (iou(g.box, p.box) >= iou_threshold) ++overlap_count[{gt_index[g.id], pred_index[p.id]}];
    }

    std::vector<WeightedEdge> edges;
    for (const auto& [key, count] : overlap_count)
        edges.push_back({key.first, key.second, static_cast<double>(count)});
    IdentityResult r;
    for (const auto& [g, p] : max_weight_matching(static_cast<int>(gt_index.size()),
                                                  static_cast<int>(pred_index.size()), edges))
        r.idtp += overlap_count[{g, p}];
    r.idfn = n_gt - r.idtp;
    r.idfp = n_pred - r.idtp;
    const long denom = n_gt + n_pred;
    r.idf1 = denom == 0 ? 1.0 : 2.0 * static_cast<double>(r.idtp) / static_cast<double>(denom);
    return r;
}

SequenceReport evaluate_sequence(const std::string& name, const std::vector<Tracklet>& gt,
                                 const std::vector<Tracklet>& pred, double iou_threshold) {
    return {name, evaluate_clearmot(gt, pred, iou_threshold), evaluate_idf1(gt, pred, iou_threshold)};
}

EvalReport combine(std::vector<SequenceReport> sequences) {
    EvalReport r;
    long idtp = 0, id_denom = 0;
    for (const auto& s : sequences) {
        r.fp += s.clear.fp;
        r.fn += s.clear.fn;
        r.idsw += s.clear.idsw;
        r.gt_boxes += s.clear.gt_boxes;
        idtp += s.identity.idtp;
        id_denom += s.clear.gt_boxes + s.clear.pred_boxes;
    }
    r.mota = 1.0 - static_cast<double>(r.fp + r.fn + r.idsw) / static_cast<double>(std::max(r.gt_boxes, 1L));
    r.idf1 = id_denom == 0 ? 1.0 : 2.0 * static_cast<double>(idtp) / static_cast<double>(id_denom);
    r.sequences = std::move(sequences);
    return r;
}

}  // namespace trackmine
