#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "trackmine/rectify.hpp"
#include "trackmine/rng.hpp"
#include "trackmine/track.hpp"

namespace trackmine {

enum class MotionModel { linear, sinusoidal };

struct SceneConfig {
    int agents = 5;
    int frames = 300;
    double fps = 30.0;
    MotionModel motion = MotionModel::linear;
    double min_box = 30.0;  ///< box side range, pixels
    double max_box = 60.0;
    double arena_width = 1280.0;
    double arena_height = 720.0;
    double max_speed = 2.0;  ///< pixels per frame
    int gaps_per_track = 1;
    int min_gap_frames = 3;  ///< missing frames per gap
    int max_gap_frames = 10;
    int min_fragment_frames = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticScene {
    std::vector<Tracklet> ground_truth;   ///< one full track per agent, ids 1..agents
    std::vector<Tracklet> fragments;      ///< gaps removed, ids 1..n in (agent, time) order
    std::vector<int> fragment_agent;      ///< ground-truth id of each fragment
    std::vector<std::pair<int, int>> expected_joins;  ///< fragment id pairs
};

/// Deterministic agents moving in a walled arena, each track cut into
/// fragments by deleting `gaps_per_track` spans. Expected joins are the
/// consecutive fragment pairs whose constructed gap is within gamma and whose
/// endpoint boxes overlap by at least mu.
SyntheticScene generate_fragmented_scene(const SceneConfig& cfg, const RectifyConfig& rcfg);

/// Fragment-id transitions realized by a set of output tracks: for each track,
/// the consecutive distinct fragments its original (non-interpolated) points
/// come from.
std::set<std::pair<int, int>> realized_joins(const std::vector<Tracklet>& fragments,
                                             const std::vector<Tracklet>& tracks);

/// Reference join solver: exhaustive enumeration of all feasible binary
/// assignments, written directly from the cost and constraint definitions.
/// Rejects more than kBruteForceLimit tracklets.
inline constexpr int kBruteForceLimit = 8;
JoinSet brute_force_matching(const std::vector<Tracklet>& tracklets, const RectifyConfig& cfg);

/// Small dense instance for oracle comparisons: `n` short tracklets whose
/// endpoints cluster around a few anchors so many pairs are valid.
std::vector<Tracklet> random_matching_instance(Rng& rng, int n, double fps = 30.0);

}  // namespace trackmine
