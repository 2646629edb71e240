#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "trackmine/rectify.hpp"
#include "trackmine/synth.hpp"

using namespace trackmine;
using trackmine::testing::moving;
using trackmine::testing::still;

TEST_CASE("pair cost examples") {
    const RectifyConfig cfg;  // mu 0.1, gamma 0.5
    const BoundingBox box(0, 0, 10, 10);

    SUBCASE("identical endpoints one frame apart at 30 fps") {
        const auto a = still(1, 0, 10, box);
        const auto b = still(2, 11, 20, box);
        const auto c = pair_cost(a, b, cfg);
        REQUIRE(c);
        CHECK(*c == doctest::Approx(1.0 + (1.0 - (1.0 / 30.0) / 0.5)).epsilon(1e-12));
        CHECK(*c == doctest::Approx(1.9333333333).epsilon(1e-9));
    }
    SUBCASE("tIoU 0.5 and a quarter-second gap") {
        // 4 fps: one frame is 0.25 s; half-height box overlaps by 0.5
        const auto a = still(1, 0, 3, box, 4.0);
        const auto b = still(2, 4, 6, BoundingBox(0, 0, 10, 5), 4.0);
        const auto c = pair_cost(a, b, cfg);
        REQUIRE(c);
        CHECK(*c == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("tIoU below mu is invalid") {
        // overlap 1 x 10 over union 190 is about 0.053
        const auto a = still(1, 0, 3, box);
        const auto b = still(2, 4, 6, BoundingBox(9, 0, 10, 10));
        CHECK(iou(a.last_box(), b.first_box()) < 0.1);
        CHECK_FALSE(pair_cost(a, b, cfg));
    }
    SUBCASE("gap above gamma is invalid") {
        // 10 fps, 6 frames = 0.6 s
        const auto a = still(1, 0, 3, box, 10.0);
        const auto b = still(2, 9, 12, box, 10.0);
        CHECK(time_gap(a, b) == doctest::Approx(0.6));
        CHECK_FALSE(pair_cost(a, b, cfg));
        const auto b_ok = still(2, 8, 12, box, 10.0);  // 0.5 s is allowed
        CHECK(pair_cost(a, b_ok, cfg));
    }
    SUBCASE("later tracklet must start strictly after the earlier ends") {
        const auto a = still(1, 0, 10, box);
        CHECK_FALSE(pair_cost(a, still(2, 10, 12, box), cfg));
        CHECK_FALSE(pair_cost(a, still(2, 5, 12, box), cfg));
        CHECK_FALSE(pair_cost(still(2, 11, 12, box), a, cfg));
    }
    SUBCASE("fps mismatch is rejected") {
        CHECK_THROWS_AS(pair_cost(still(1, 0, 3, box, 30.0), still(2, 4, 5, box, 25.0), cfg),
                        std::invalid_argument);
    }
}

TEST_CASE("solve_matching examples") {
    const RectifyConfig cfg;
    const BoundingBox box(0, 0, 10, 10);

    SUBCASE("empty") { CHECK(solve_matching({}, cfg).joins.empty()); }

    SUBCASE("single valid pair") {
        const auto r = solve_matching({still(1, 0, 5, box), still(2, 7, 9, box)}, cfg);
        REQUIRE(r.joins.size() == 1);
        CHECK(r.joins[0].i == 0);
        CHECK(r.joins[0].j == 1);
    }

    SUBCASE("chain joins both links") {
        const std::vector<Tracklet> t{still(1, 0, 5, box), still(2, 7, 9, box), still(3, 11, 14, box)};
        const auto r = solve_matching(t, cfg);
        REQUIRE(r.joins.size() == 2);
        CHECK(std::pair(r.joins[0].i, r.joins[0].j) == std::pair(0, 1));
        CHECK(std::pair(r.joins[1].i, r.joins[1].j) == std::pair(1, 2));
        CHECK(r.total_cost == brute_force_matching(t, cfg).total_cost);
    }

    SUBCASE("better predecessor wins") {
        // A ends adjacent to B with full overlap; A' ends at a partial overlap with a longer gap
        const auto A = still(1, 0, 9, box);
        const auto Ap = still(2, 0, 5, BoundingBox(4, 0, 10, 10));
        const auto B = still(3, 10, 12, box);
        const std::vector<Tracklet> t{A, Ap, B};
        const double cab = *pair_cost(A, B, cfg);
        const double capb = *pair_cost(Ap, B, cfg);
        CHECK(cab > capb);
        const auto r = solve_matching(t, cfg);
        REQUIRE(r.joins.size() == 1);
        CHECK(r.joins[0].i == 0);
        CHECK(r.joins[0].j == 2);
        CHECK(r.total_cost == brute_force_matching(t, cfg).total_cost);
    }
}

TEST_CASE("solve_matching equals exhaustive search on random instances") {
    const RectifyConfig cfg;
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = rng.uniform_int(2, 8);
        const auto t = random_matching_instance(rng, n);
        const auto fast = solve_matching(t, cfg);
        const auto slow = brute_force_matching(t, cfg);
        CHECK(fast.total_cost == slow.total_cost);

        std::set<int> earlier, later;
        for (const auto& j : fast.joins) {
            CHECK(earlier.insert(j.i).second);
            CHECK(later.insert(j.j).second);
            CHECK(j.gap <= cfg.gamma);
            CHECK(j.tiou >= cfg.mu);
            CHECK(j.cost >= cfg.mu);
            CHECK(j.cost <= 2.0);
        }
    }
}

TEST_CASE("candidate costs stay within bounds") {
    const RectifyConfig cfg;
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = random_matching_instance(rng, 8);
        for (const auto& c : enumerate_candidates(t, cfg)) {
            CHECK(c.cost > cfg.mu);
            CHECK(c.cost < 2.0);
            CHECK(t[c.i].end_frame() < t[c.j].start_frame());
        }
    }
}

TEST_CASE("rectify with no valid pairs is a fixpoint") {
    const RectifyConfig cfg;
    const std::vector<Tracklet> in{still(1, 0, 5, BoundingBox(0, 0, 10, 10)),
                                   still(2, 7, 9, BoundingBox(100, 100, 10, 10))};
    const auto r = rectify(in, cfg);
    CHECK(r.tracks == in);
    CHECK(r.log.iterations == 1);
    CHECK(r.log.joins.empty());
}

TEST_CASE("rectify joins a fragmented trajectory and interpolates gaps") {
    const RectifyConfig cfg;
    const auto full = moving(1, 0, 59, BoundingBox(100, 100, 40, 40), 1.0, 0.5);
    auto frag = [&](int id, int first, int last) {
        Tracklet t;
        t.id = id;
        t.fps = full.fps;
        t.points.assign(full.points.begin() + first, full.points.begin() + last + 1);
        return t;
    };
    const std::vector<Tracklet> pieces{frag(1, 0, 15), frag(2, 20, 35), frag(3, 41, 59)};
    const auto r = rectify(pieces, cfg, "video");
    REQUIRE(r.tracks.size() == 1);
    const auto& t = r.tracks[0];
    CHECK(t.id == 1);
    CHECK(t.points.size() == 60);
    CHECK_NOTHROW(validate(t));

    // Dropping interpolated points gives back the fragments' points.
    std::vector<TrackPoint> original;
    for (const auto& p : t.points)
        if (!p.interpolated) original.push_back(p);
    std::vector<TrackPoint> expected;
    for (const auto& f : pieces) expected.insert(expected.end(), f.points.begin(), f.points.end());
    CHECK(original == expected);

    // Linear motion is reproduced exactly by interpolation (up to rounding).
    for (const auto& p : t.points) {
        const auto& truth = full.points[p.frame].box;
        CHECK(p.box.x() == doctest::Approx(truth.x()));
        CHECK(p.box.y() == doctest::Approx(truth.y()));
    }
    CHECK(r.log.joins.size() == 2);
    CHECK(r.log.iterations == 2);
    CHECK(r.log.joins[0].gap == FrameSpan{16, 19});
}

TEST_CASE("rectify without interpolation keeps the gap") {
    RectifyConfig cfg;
    cfg.interpolate_gaps = false;
    const BoundingBox box(0, 0, 10, 10);
    const auto r = rectify({still(1, 0, 4, box), still(2, 8, 10, box)}, cfg);
    REQUIRE(r.tracks.size() == 1);
    CHECK(r.tracks[0].points.size() == 8);
    CHECK(r.tracks[0].at(6) == nullptr);
}

TEST_CASE("rectify keeps parallel identities apart") {
    const RectifyConfig cfg;
    const auto a = moving(1, 0, 39, BoundingBox(50, 50, 30, 30), 1.0, 0.0);
    const auto b = moving(2, 0, 39, BoundingBox(50, 300, 30, 30), 1.0, 0.0);
    auto cut = [](const Tracklet& t, int id, int first, int last) {
        Tracklet out;
        out.id = id;
        out.fps = t.fps;
        out.points.assign(t.points.begin() + first, t.points.begin() + last + 1);
        return out;
    };
    const std::vector<Tracklet> in{cut(a, 1, 0, 15), cut(a, 2, 20, 39), cut(b, 3, 0, 18), cut(b, 4, 23, 39)};
    const auto r = rectify(in, cfg);
    REQUIRE(r.tracks.size() == 2);
    const auto joins = realized_joins(in, r.tracks);
    CHECK(joins == std::set<std::pair<int, int>>{{1, 2}, {3, 4}});
}

TEST_CASE("rectify needs at most n - 1 merging rounds") {
    // Every fragment has two equally placed successors; the solver can only take
    // one per round so chains form over several rounds.
    const RectifyConfig cfg;
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(2, 8);
        const auto t = random_matching_instance(rng, n);
        const auto r = rectify(t, cfg);
        CHECK(r.log.iterations <= n);  // n - 1 merging rounds plus the final empty one
        CHECK(r.tracks.size() + r.log.joins.size() == static_cast<std::size_t>(n));
        for (const auto& track : r.tracks) CHECK_NOTHROW(validate(track));
        // per round uniqueness
        std::map<int, std::set<int>> earlier, later;
        for (const auto& j : r.log.joins) {
            CHECK(earlier[j.iteration].insert(j.earlier_id).second);
            CHECK(later[j.iteration].insert(j.later_id).second);
            CHECK(j.tiou >= cfg.mu);
        }
    }
}

TEST_CASE("confidence pre-filter drops weak tracklets") {
    RectifyConfig cfg;
    cfg.min_confidence = 0.5;
    const BoundingBox box(0, 0, 10, 10);
    auto weak = still(2, 7, 9, box);
    for (auto& p : weak.points) p.confidence = 0.2;
    const auto r = rectify({still(1, 0, 5, box), weak}, cfg);
    CHECK(r.tracks.size() == 1);
    CHECK(r.log.joins.empty());
}

TEST_CASE("mine_hard_examples") {
    const RectifyConfig cfg;  // 0.5 s padding

    SUBCASE("empty log") { CHECK(mine_hard_examples(MergeLog{}, {0, 100}, cfg).empty()); }

    SUBCASE("single join padded by 15 frames at 30 fps") {
        MergeLog log;
        log.video_id = "v";
        log.fps = 30.0;
        log.joins.push_back({1, 1, 2, {0, 30}, {45, 90}, {31, 44}, 1.5, 0.9});
        const auto clips = mine_hard_examples(log, {0, 299}, cfg);
        REQUIRE(clips.size() == 1);
        CHECK(clips[0].start_frame == 0);
        CHECK(clips[0].end_frame == 105);
        CHECK(clips[0].track_ids == std::vector<int>{1, 2});
        CHECK(clips[0].video_id == "v");

        const auto clamped = mine_hard_examples(log, {0, 100}, cfg);
        CHECK(clamped[0].end_frame == 100);
    }

    SUBCASE("overlapping clips merge") {
        MergeLog log;
        log.fps = 30.0;
        log.joins.push_back({1, 1, 2, {0, 30}, {45, 90}, {31, 44}, 1.5, 0.9});
        log.joins.push_back({1, 5, 6, {80, 120}, {130, 150}, {121, 129}, 1.5, 0.9});
        log.joins.push_back({1, 7, 8, {400, 410}, {415, 420}, {411, 414}, 1.5, 0.9});
        const auto clips = mine_hard_examples(log, {0, 999}, cfg);
        REQUIRE(clips.size() == 2);
        CHECK(clips[0].start_frame == 0);
        CHECK(clips[0].end_frame == 165);
        CHECK(clips[0].track_ids == std::vector<int>{1, 2, 5, 6});
        CHECK(clips[0].gap_spans.size() == 2);
        CHECK(clips[1].start_frame == 385);
    }
}
