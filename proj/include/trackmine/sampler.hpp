#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trackmine/geometry.hpp"
#include "trackmine/rectify.hpp"
#include "trackmine/track.hpp"

namespace trackmine {

/// A short annotated clip. An identity is visible at a frame iff its
/// tracklet has a point there.
struct AnnotatedClip {
    std::string ref;  ///< where the frames live (video id or frame directory)
    FrameSpan frames;
    std::vector<Tracklet> tracks;

    int length() const { return frames.last - frames.first + 1; }
};

struct PairTarget {
    int id = 0;
    bool visible = false;                ///< present at the later frame
    std::optional<MotionTarget> motion;  ///< set iff visible
    BoundingBox box;                     ///< box at the earlier frame
    BoundingBox context;                 ///< 2x region around `box`
};

struct TrainingPair {
    std::string clip;
    int frame = 0;
    int later_frame = 0;
    std::vector<PairTarget> targets;

    int delta() const { return later_frame - frame; }
};

/// Supervision for the frame pair (t, t + delta): every identity present at t
/// gets its context region, a visibility label for t + delta, and the motion
/// deltas when it is still present. Throws std::invalid_argument when delta < 1
/// or either frame lies outside the clip.
TrainingPair emit_training_pair(const AnnotatedClip& clip, int t, int delta);

struct SampleConfig {
    int batch_size = 16;
    double balancing_ratio = 0.5;  ///< |RV| / (|RV| + |HV|)
    double hard_rate = 0.75;       ///< share of RV draws taken from hard clips
    int max_delta = 0;             ///< 0 means the full clip length
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Category { hv, rv_easy, rv_hard };

const char* to_string(Category c);

struct Allocation {
    int hv = 0;
    int rv_easy = 0;
    int rv_hard = 0;

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Round half up, used for every allocation count.
int round_half_up(double x);

/// n_rv = round(batch * ratio), n_hard = round(n_rv * hard_rate).
Allocation allocate(const SampleConfig& cfg);

struct TaggedClip {
    AnnotatedClip clip;
    bool hard = false;
};

struct ManifestEntry {
    Category category = Category::hv;
    TrainingPair pair;
};

struct BatchManifest {
    int batch_index = 0;
    std::vector<ManifestEntry> entries;
};

/// One batch with exact category counts; clips, t and delta drawn uniformly
/// from a stream seeded by (cfg.seed, batch_index). Throws std::invalid_argument
/// naming the category when a needed pool is empty.
BatchManifest compose_batch(const std::vector<AnnotatedClip>& hv_pool,
                            const std::vector<TaggedClip>& rv_pool, const SampleConfig& cfg,
                            int batch_index = 0);

/// Restricts tracks to the clip span, dropping identities with no point inside.
AnnotatedClip make_clip(const std::string& ref, const std::vector<Tracklet>& tracks, FrameSpan span);

/// Tiles `extent` with windows of `clip_frames`, keeping those that stay
/// `pad_frames` clear of every repaired gap. These become the easy RV pool.
std::vector<AnnotatedClip> easy_clips(const std::string& ref, const std::vector<Tracklet>& tracks,
                                      FrameSpan extent, const std::vector<HardClip>& hard,
                                      int clip_frames, int pad_frames = 0);

}  // namespace trackmine
