#include "trackmine/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace trackmine {

void SceneConfig::validate() const {
    if (agents < 0) throw std::invalid_argument("synth: agents must be >= 0");
    if (frames < 1) throw std::invalid_argument("synth: frames must be >= 1");
    if (!(fps > 0.0)) throw std::invalid_argument("synth: fps must be positive");
    if (!(min_box > 0.0) || max_box < min_box)
        throw std::invalid_argument("synth: invalid box size range");
    if (arena_width <= max_box || arena_height <= max_box)
        throw std::invalid_argument("synth: arena smaller than the largest box");
    if (gaps_per_track < 0) throw std::invalid_argument("synth: gaps_per_track must be >= 0");
    if (min_gap_frames < 1 || max_gap_frames < min_gap_frames)
        throw std::invalid_argument("synth: invalid gap length range");
    if (min_fragment_frames < 1) throw std::invalid_argument("synth: min_fragment_frames must be >= 1");
    const long needed = static_cast<long>(gaps_per_track) * max_gap_frames +
                        static_cast<long>(gaps_per_track + 1) * min_fragment_frames;
    if (needed > frames)
        throw std::invalid_argument("synth: gaps do not fit in a " + std::to_string(frames) +
                                    "-frame track (need " + std::to_string(needed) + ")");
}

namespace {

// Reflects a coordinate into [0, limit] and flips the velocity on contact.
void bounce(double& pos, double& vel, double limit) {
    if (pos < 0.0) {
        pos = -pos;
        vel = -vel;
    }
    if (pos > limit) {
        pos = 2.0 * limit - pos;
        vel = -vel;
    }
    pos = std::clamp(pos, 0.0, limit);
}

Tracklet simulate_agent(const SceneConfig& cfg, Rng& rng, int id) {
    const double w = rng.uniform(cfg.min_box, cfg.max_box);
    const double h = rng.uniform(cfg.min_box, cfg.max_box);
    const double max_x = cfg.arena_width - w;
    const double max_y = cfg.arena_height - h;
    double x = rng.uniform(0.0, max_x);
    double y = rng.uniform(0.0, max_y);
    const double speed = rng.uniform(0.25, 1.0) * cfg.max_speed;
    const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double vx = speed * std::cos(heading);
    double vy = speed * std::sin(heading);
    const double wobble = rng.uniform(0.2, 0.6);
    const double period = rng.uniform(30.0, 90.0);

    Tracklet t;
    t.id = id;
    t.fps = cfg.fps;
    t.points.reserve(cfg.frames);
    for (int f = 0; f < cfg.frames; ++f) {
        t.points.push_back({f, BoundingBox(x, y, w, h), false, 1.0});
        double step_x = vx;
        double step_y = vy;
        if (cfg.motion == MotionModel::sinusoidal) {
            const double turn = wobble * std::sin(2.0 * std::numbers::pi * f / period);
            step_x = vx * std::cos(turn) - vy * std::sin(turn);
            step_y = vx * std::sin(turn) + vy * std::cos(turn);
        }
        x += step_x;
        y += step_y;
        double sx = step_x, sy = step_y;
        bounce(x, sx, max_x);
        bounce(y, sy, max_y);
        if (sx != step_x) vx = -vx;
        if (sy != step_y) vy = -vy;
    }
    return t;
}

}  // namespace

SyntheticScene generate_fragmented_scene(const SceneConfig& cfg, const RectifyConfig& rcfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    SyntheticScene scene;
    int next_fragment_id = 1;

    for (int a = 0; a < cfg.agents; ++a) {
        Tracklet gt = simulate_agent(cfg, rng, a + 1);

        const int g = cfg.gaps_per_track;
        std::vector<int> gap_len(g);
        int gap_total = 0;
        for (auto& len : gap_len) {
            len = rng.uniform_int(cfg.min_gap_frames, cfg.max_gap_frames);
            gap_total += len;
        }
        const int spare = cfg.frames - gap_total - (g + 1) * cfg.min_fragment_frames;
        std::vector<int> cuts(g);
        for (auto& c : cuts) c = rng.uniform_int(0, spare);
        std::sort(cuts.begin(), cuts.end());

        // fragment k has min_fragment_frames + (cuts[k] - cuts[k-1]) frames,
        // the last fragment takes whatever remains
        std::vector<int> frag_len(g + 1);
        int prev_cut = 0;
        for (int k = 0; k < g; ++k) {
            frag_len[k] = cfg.min_fragment_frames + cuts[k] - prev_cut;
            prev_cut = cuts[k];
        }
        frag_len[g] = cfg.frames - gap_total - std::accumulate(frag_len.begin(), frag_len.end() - 1, 0);

        int cursor = 0;
        for (int k = 0; k <= g; ++k) {
            Tracklet frag;
            frag.id = next_fragment_id++;
            frag.fps = cfg.fps;
            frag.points.assign(gt.points.begin() + cursor, gt.points.begin() + cursor + frag_len[k]);
            cursor += frag_len[k];
            if (k > 0) {
                const auto& before = scene.fragments.back();
                const double gap_seconds = (gap_len[k - 1] + 1) / cfg.fps;
                const double overlap = iou(before.last_box(), frag.first_box());
                if (gap_seconds <= rcfg.gamma && overlap >= rcfg.mu)
                    scene.expected_joins.emplace_back(before.id, frag.id);
            }
            if (k < g) cursor += gap_len[k];
            scene.fragments.push_back(std::move(frag));
            scene.fragment_agent.push_back(gt.id);
        }
        scene.ground_truth.push_back(std::move(gt));
    }
    return scene;
}

std::set<std::pair<int, int>> realized_joins(const std::vector<Tracklet>& fragments,
                                             const std::vector<Tracklet>& tracks) {
    using Key = std::tuple<int, double, double, double, double>;
    std::map<Key, int> owner;
    for (const auto& f : fragments)
        for (const auto& p : f.points)
            owner.emplace(Key{p.frame, p.box.x(), p.box.y(), p.box.w(), p.box.h()}, f.id);

    std::set<std::pair<int, int>> joins;
    for (const auto& t : tracks) {
        int last = -1;
        for (const auto& p : t.points) {
            if (p.interpolated) continue;
            auto it = owner.find(Key{p.frame, p.box.x(), p.box.y(), p.box.w(), p.box.h()});
            if (it == owner.end()) continue;
            if (last != -1 && it->second != last) joins.emplace(last, it->second);
            last = it->second;
        }
    }
    return joins;
}

namespace {

struct BruteForceSearch {
    int n = 0;
    std::vector<std::vector<double>> cost;  // NaN marks an infeasible pair
    std::vector<std::vector<double>> tiou;
    std::vector<std::vector<double>> gap;
    std::vector<int> choice;  // later index chosen for each earlier index, or -1
    std::vector<char> later_used;
    double best_total = 0.0;
    std::vector<int> best_choice;

    void search(int i) {
        if (i == n) {
            double total = 0.0;
            for (int k = 0; k < n; ++k)
                if (choice[k] >= 0) total += cost[k][choice[k]];
            if (total > best_total) {
                best_total = total;
                best_choice = choice;
            }
            return;
        }
        choice[i] = -1;
        search(i + 1);
        for (int j = 0; j < n; ++j) {
            if (later_used[j] || std::isnan(cost[i][j])) continue;
            later_used[j] = 1;
            choice[i] = j;
            search(i + 1);
            later_used[j] = 0;
            choice[i] = -1;
        }
    }
};

}  // namespace

JoinSet brute_force_matching(const std::vector<Tracklet>& tracklets, const RectifyConfig& cfg) {
    const int n = static_cast<int>(tracklets.size());
    if (n > kBruteForceLimit)
        throw std::invalid_argument("brute_force_matching: at most " +
                                    std::to_string(kBruteForceLimit) + " tracklets, got " +
                                    std::to_string(n));
    BruteForceSearch s;
    s.n = n;
    s.cost.assign(n, std::vector<double>(n, std::nan("")));
    s.tiou = s.cost;
    s.gap = s.cost;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto& a = tracklets[i];
            const auto& b = tracklets[j];
            if (i == j || b.points.front().frame <= a.points.back().frame) continue;
            const double t = static_cast<double>(b.points.front().frame - a.points.back().frame) / a.fps;
            const double overlap = iou(a.points.back().box, b.points.front().box);
            if (t > cfg.gamma || overlap < cfg.mu) continue;
            s.cost[i][j] = overlap + (1.0 - t / cfg.gamma);
            s.tiou[i][j] = overlap;
            s.gap[i][j] = t;
        }
    }
    s.choice.assign(n, -1);
    s.later_used.assign(n, 0);
    s.best_choice = s.choice;
    s.search(0);

    JoinSet out;
    for (int i = 0; i < n; ++i) {
        const int j = s.best_choice[i];
        if (j >= 0) out.joins.push_back({i, j, s.cost[i][j], s.tiou[i][j], s.gap[i][j]});
    }
    out.total_cost = s.best_total;
    return out;
}

std::vector<Tracklet> random_matching_instance(Rng& rng, int n, double fps) {
    const int anchors = rng.uniform_int(1, 3);
    std::vector<BoundingBox> anchor_boxes;
    for (int k = 0; k < anchors; ++k)
        anchor_boxes.emplace_back(rng.uniform(0.0, 60.0), rng.uniform(0.0, 60.0),
                                  rng.uniform(30.0, 50.0), rng.uniform(30.0, 50.0));

    std::vector<Tracklet> out;
    for (int k = 0; k < n; ++k) {
        Tracklet t;
        t.id = k + 1;
        t.fps = fps;
        const auto& anchor = anchor_boxes[rng.uniform_int(0, anchors - 1)];
        const int start = rng.uniform_int(0, 36);
        const int len = rng.uniform_int(1, 6);
        for (int f = start; f < start + len; ++f) {
            t.points.push_back({f,
                                BoundingBox(anchor.x() + rng.uniform(-12.0, 12.0),
                                            anchor.y() + rng.uniform(-12.0, 12.0),
                                            anchor.w() * rng.uniform(0.8, 1.2),
                                            anchor.h() * rng.uniform(0.8, 1.2)),
                                false, 1.0});
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace trackmine
