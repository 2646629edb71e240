#include "trackmine/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "trackmine/rng.hpp"

namespace trackmine {

TrainingPair emit_training_pair(const AnnotatedClip& clip, int t, int delta) {
    if (delta < 1) throw std::invalid_argument("training pair: delta must be >= 1");
    if (t < clip.frames.first || t + delta > clip.frames.last)
        throw std::invalid_argument("training pair: frames " + std::to_string(t) + ", " +
                                    std::to_string(t + delta) + " outside clip " + clip.ref);
    TrainingPair pair;
    pair.clip = clip.ref;
    pair.frame = t;
    pair.later_frame = t + delta;
    for (const auto& track : clip.tracks) {
        const TrackPoint* now = track.at(t);
        if (now == nullptr) continue;
        PairTarget target;
        target.id = track.id;
        target.box = now->box;
        target.context = context_region(now->box);
        if (const TrackPoint* later = track.at(t + delta)) {
            target.visible = true;
            target.motion = encode_motion_target(now->box, later->box);
        }
        pair.targets.push_back(std::move(target));
    }
    return pair;
}

void SampleConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("sample: batch size must be >= 1");
    if (!(balancing_ratio >= 0.0 && balancing_ratio <= 1.0))
        throw std::invalid_argument("sample: balancing ratio must lie in [0, 1]");
    if (!(hard_rate >= 0.0 && hard_rate <= 1.0))
        throw std::invalid_argument("sample: hard rate must lie in [0, 1]");
    if (max_delta < 0) throw std::invalid_argument("sample: max delta must be >= 0");
}

const char* to_string(Category c) {
    switch (c) {
        case Category::hv: return "hv";
        case Category::rv_easy: return "rv_easy";
        case Category::rv_hard: return "rv_hard";
    }
    return "?";
}

int round_half_up(double x) {
    // The epsilon absorbs representation error in products such as 16 * 0.35.
    return static_cast<int>(std::floor(x + 0.5 + 1e-9));
}

Allocation allocate(const SampleConfig& cfg) {
    cfg.validate();
    const int n_rv = round_half_up(cfg.batch_size * cfg.balancing_ratio);
    const int n_hard = round_half_up(n_rv * cfg.hard_rate);
    return {cfg.batch_size - n_rv, n_rv - n_hard, n_hard};
}

namespace {

TrainingPair draw_pair(const AnnotatedClip& clip, int max_delta, Rng& rng) {
    if (clip.length() < 2)
        throw std::invalid_argument("sample: clip " + clip.ref + " has fewer than 2 frames");
    const int limit = max_delta > 0 ? std::min(max_delta, clip.length() - 1) : clip.length() - 1;
    const int delta = rng.uniform_int(1, limit);
    const int t = rng.uniform_int(clip.frames.first, clip.frames.last - delta);
    return emit_training_pair(clip, t, delta);
}

}  // namespace

BatchManifest compose_batch(const std::vector<AnnotatedClip>& hv_pool,
                            const std::vector<TaggedClip>& rv_pool, const SampleConfig& cfg,
                            int batch_index) {
    const Allocation alloc = allocate(cfg);
    std::vector<const AnnotatedClip*> easy, hard, hv;
    for (const auto& c : hv_pool) hv.push_back(&c);
    for (const auto& c : rv_pool) (c.hard ? hard : easy).push_back(&c.clip);

    const auto require = [](const std::vector<const AnnotatedClip*>& pool, int n, Category cat) {
        if (n > 0 && pool.empty())
            throw std::invalid_argument(std::string("sample: no clips in category ") + to_string(cat) +
                                        " but " + std::to_string(n) + " requested");
    };
    require(hv, alloc.hv, Category::hv);
    require(easy, alloc.rv_easy, Category::rv_easy);
    require(hard, alloc.rv_hard, Category::rv_hard);

    Rng rng(derive_seed(cfg.seed, "batch-" + std::to_string(batch_index)));
    BatchManifest manifest;
    manifest.batch_index = batch_index;
    const auto draw = [&](const std::vector<const AnnotatedClip*>& pool, int n, Category cat) {
        for (int k = 0; k < n; ++k) {
            const auto* clip = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
            manifest.entries.push_back({cat, draw_pair(*clip, cfg.max_delta, rng)});
        }
    };
    draw(hv, alloc.hv, Category::hv);
    draw(easy, alloc.rv_easy, Category::rv_easy);
    draw(hard, alloc.rv_hard, Category::rv_hard);
    return manifest;
}

AnnotatedClip make_clip(const std::string& ref, const std::vector<Tracklet>& tracks, FrameSpan span) {
    AnnotatedClip clip{ref, span, {}};
    for (const auto& t : tracks) {
        Tracklet cut;
        cut.id = t.id;
        cut.fps = t.fps;
        for (const auto& p : t.points)
            if (p.frame >= span.first && p.frame <= span.last) cut.points.push_back(p);
        if (!cut.points.empty()) clip.tracks.push_back(std::move(cut));
    }
    return clip;
}

std::vector<AnnotatedClip> easy_clips(const std::string& ref, const std::vector<Tracklet>& tracks,
                                      FrameSpan extent, const std::vector<HardClip>& hard,
                                      int clip_frames, int pad_frames) {
    if (clip_frames < 2) throw std::invalid_argument("easy_clips: clip length must be >= 2");
    if (pad_frames < 0) throw std::invalid_argument("easy_clips: padding must be >= 0");
    std::vector<AnnotatedClip> out;
    for (int start = extent.first; start + clip_frames - 1 <= extent.last; start += clip_frames) {
        const FrameSpan span{start, start + clip_frames - 1};
        const bool overlaps = std::any_of(hard.begin(), hard.end(), [&](const HardClip& h) {
            return std::any_of(h.gap_spans.begin(), h.gap_spans.end(), [&](const FrameSpan& g) {
                return g.first - pad_frames <= span.last && span.first <= g.last + pad_frames;
            });
        });
        if (!overlaps) out.push_back(make_clip(ref, tracks, span));
    }
    return out;
}

}  // namespace trackmine
