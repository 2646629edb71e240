#include <opencv2/core.hpp>

#include "doctest.h"
#include "trackmine/hallucinate.hpp"

using namespace trackmine;

namespace {

cv::Mat gradient_image(int w, int h) {
    cv::Mat img(h, w, CV_8UC3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.at<cv::Vec3b>(y, x) = cv::Vec3b(x % 256, y % 256, (x * y) % 256);
    return img;
}

double min_of(const cv::Mat& m) {
    double lo = 0.0, hi = 0.0;
    cv::minMaxLoc(m, &lo, &hi);
    return lo;
}

double max_of(const cv::Mat& m) {
    double lo = 0.0, hi = 0.0;
    cv::minMaxLoc(m, &lo, &hi);
    return hi;
}

bool bit_equal(const cv::Mat& a, const cv::Mat& b) {
    return a.size() == b.size() && a.type() == b.type() && cv::norm(a, b, cv::NORM_INF) == 0.0;
}

}  // namespace

TEST_CASE("zoom schedule shape") {
    ZoomConfig cfg;
    SUBCASE("default length") { CHECK(zoom_schedule(cfg, {640, 480}).size() == 16); }

    SUBCASE("identity schedule") {
        for (const auto& w : zoom_schedule(cfg, {100, 80})) CHECK(w == BoundingBox(0, 0, 100, 80));
    }

    SUBCASE("half scale ends centered") {
        cfg.final_scale = 0.5;
        const auto w = zoom_schedule(cfg, {100, 100});
        CHECK(w.front() == BoundingBox(0, 0, 100, 100));
        CHECK(w.back().x() == doctest::Approx(25.0));
        CHECK(w.back().y() == doctest::Approx(25.0));
        CHECK(w.back().w() == doctest::Approx(50.0));
        CHECK(w.back().h() == doctest::Approx(50.0));
        for (std::size_t t = 1; t < w.size(); ++t) CHECK(w[t - 1].contains(w[t]));

        cfg.direction = ZoomDirection::zoom_out;
        const auto out = zoom_schedule(cfg, {100, 100});
        CHECK(out.front() == w.back());
        CHECK(out.back() == w.front());
    }

    SUBCASE("pan that leaves the image is rejected") {
        cfg.final_scale = 0.5;
        cfg.pan_x = 5.0;  // 15 frames * 5 px = 75 px drift, window half-width 25
        CHECK_THROWS_AS(zoom_schedule(cfg, {100, 100}), std::invalid_argument);
        cfg.pan_x = 1.0;
        CHECK_NOTHROW(zoom_schedule(cfg, {100, 100}));
    }

    SUBCASE("invalid configs") {
        cfg.frames = 1;
        CHECK_THROWS_AS(zoom_schedule(cfg, {10, 10}), std::invalid_argument);
        cfg.frames = 4;
        cfg.final_scale = 0.0;
        CHECK_THROWS_AS(zoom_schedule(cfg, {10, 10}), std::invalid_argument);
        cfg.final_scale = 1.5;
        CHECK_THROWS_AS(zoom_schedule(cfg, {10, 10}), std::invalid_argument);
    }
}

TEST_CASE("identity hallucination reproduces the source") {
    const auto img = gradient_image(64, 48);
    const std::vector<BoundingBox> boxes{BoundingBox(5, 6, 10, 12)};
    const auto v = hallucinate_video(img, boxes, ZoomConfig{}, EffectConfig{}, "src");
    REQUIRE(v.frames.size() == 16);
    for (const auto& f : v.frames) CHECK(bit_equal(f, img));
    REQUIRE(v.tracks.size() == 1);
    for (const auto& a : v.tracks[0].annotations) {
        REQUIRE(a.visible());
        CHECK(*a.box == boxes[0]);
    }
}

TEST_CASE("centered zoom doubles a central box") {
    const auto img = gradient_image(100, 100);
    ZoomConfig cfg;
    cfg.final_scale = 0.5;
    const auto v = hallucinate_video(img, {BoundingBox(40, 40, 20, 20)}, cfg, EffectConfig{});
    const auto& last = v.tracks[0].annotations.back();
    REQUIRE(last.visible());
    CHECK(last.box->w() == doctest::Approx(40.0));
    CHECK(last.box->h() == doctest::Approx(40.0));
    CHECK(last.box->cx() == doctest::Approx(50.0));
    CHECK(v.frames.back().cols == 100);
}

TEST_CASE("rendered pixels follow the box transform") {
    // A white square on black; after zooming, the mean inside the mapped box
    // should stay bright and the surroundings dark.
    cv::Mat img(200, 200, CV_8UC1, cv::Scalar(0));
    img(cv::Rect(80, 90, 30, 20)).setTo(255);
    ZoomConfig cfg;
    cfg.final_scale = 0.4;
    cfg.output_size = {160, 120};
    const auto v = hallucinate_video(img, {BoundingBox(80, 90, 30, 20)}, cfg, EffectConfig{});
    for (std::size_t t = 0; t < v.frames.size(); ++t) {
        const auto& b = *v.tracks[0].annotations[t].box;
        const cv::Rect inner(static_cast<int>(std::ceil(b.x() + 1)), static_cast<int>(std::ceil(b.y() + 1)),
                             static_cast<int>(b.w() - 2), static_cast<int>(b.h() - 2));
        CHECK(cv::mean(v.frames[t](inner))[0] > 250.0);
        CHECK(v.frames[t].at<std::uint8_t>(0, 0) == 0);
    }
}

TEST_CASE("boxes leaving the window become invisible") {
    const auto img = gradient_image(100, 100);
    ZoomConfig cfg;
    cfg.final_scale = 0.5;
    const std::vector<BoundingBox> boxes{BoundingBox(0, 0, 10, 10),    // outside the final window
                                         BoundingBox(20, 40, 10, 10)};  // 50% retained at the end
    const auto v = hallucinate_video(img, boxes, cfg, EffectConfig{});
    CHECK(v.tracks[0].annotations.front().visible());
    CHECK_FALSE(v.tracks[0].annotations.back().visible());
    const auto& partial = v.tracks[1].annotations.back();
    REQUIRE(partial.visible());
    CHECK(partial.box->x() == doctest::Approx(0.0));
    CHECK(partial.box->w() == doctest::Approx(10.0));  // half of the 20 px transformed width
    CHECK(partial.transformed.x() == doctest::Approx(-10.0));
}

TEST_CASE("effects never change annotations") {
    const auto img = gradient_image(120, 90);
    ZoomConfig cfg;
    cfg.final_scale = 0.6;
    cfg.direction = ZoomDirection::zoom_out;
    const std::vector<BoundingBox> boxes{BoundingBox(30, 20, 30, 40), BoundingBox(70, 50, 20, 20)};
    EffectConfig fx;
    fx.motion_blur = {true, 9, 30.0, true};
    fx.lighting = {true, 15.0, 1.2, 0.8};
    fx.compression = {true, 40, 5};
    fx.seed = 5;
    const auto plain = hallucinate_video(img, boxes, cfg, EffectConfig{});
    const auto styled = hallucinate_video(img, boxes, cfg, fx);
    REQUIRE(plain.tracks.size() == styled.tracks.size());
    for (std::size_t k = 0; k < plain.tracks.size(); ++k) {
        for (std::size_t t = 0; t < plain.tracks[k].annotations.size(); ++t) {
            CHECK(plain.tracks[k].annotations[t].box == styled.tracks[k].annotations[t].box);
            CHECK(plain.tracks[k].annotations[t].transformed == styled.tracks[k].annotations[t].transformed);
        }
    }
    const auto again = hallucinate_video(img, boxes, cfg, fx);
    for (std::size_t t = 0; t < again.frames.size(); ++t) CHECK(bit_equal(again.frames[t], styled.frames[t]));
}

TEST_CASE("boxes outside the image are rejected") {
    const auto img = gradient_image(50, 50);
    CHECK_THROWS_AS(hallucinate_video(img, {BoundingBox(45, 0, 10, 10)}, ZoomConfig{}, EffectConfig{}),
                    std::invalid_argument);
    CHECK_NOTHROW(hallucinate_video(img, {}, ZoomConfig{}, EffectConfig{}));
}

TEST_CASE("effect pipeline") {
    const std::vector<cv::Mat> gray{cv::Mat(20, 30, CV_8UC1, cv::Scalar(128)),
                                    cv::Mat(20, 30, CV_8UC1, cv::Scalar(128))};

    SUBCASE("identity is a bit-exact copy") {
        const auto out = apply_effect_pipeline(gray, EffectConfig{});
        REQUIRE(out.size() == 2);
        CHECK(bit_equal(out[0], gray[0]));
    }
    SUBCASE("brightness shift on mid gray") {
        EffectConfig fx;
        fx.lighting = {true, 20.0, 1.0, 1.0};
        const auto out = apply_effect_pipeline(gray, fx);
        CHECK(min_of(out[0]) == 148.0);
        CHECK(max_of(out[0]) == 148.0);
        fx.lighting.brightness = 200.0;
        CHECK(min_of(apply_effect_pipeline(gray, fx)[0]) == 255.0);
    }
    SUBCASE("same seed, same output; shapes preserved") {
        Rng rng(77);
        const auto img = gradient_image(40, 30);
        const std::vector<cv::Mat> frames(6, img);
        EffectConfig fx = sample_effects(rng);
        fx.motion_blur.enabled = fx.compression.enabled = fx.lighting.enabled = true;
        const auto a = apply_effect_pipeline(frames, fx);
        const auto b = apply_effect_pipeline(frames, fx);
        REQUIRE(a.size() == frames.size());
        for (std::size_t t = 0; t < a.size(); ++t) {
            CHECK(bit_equal(a[t], b[t]));
            CHECK(a[t].size() == img.size());
            CHECK(a[t].type() == img.type());
        }
    }
    SUBCASE("blur kernel sums to one") {
        for (int len : {1, 3, 8, 15})
            for (double angle : {0.0, 33.0, 90.0, 135.0})
                CHECK(cv::sum(motion_blur_kernel(len, angle))[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("sampled effect ranges") {
    Rng rng(1);
    int enabled = 0;
    for (int k = 0; k < 400; ++k) {
        const auto fx = sample_effects(rng);
        CHECK(fx.motion_blur.kernel_length >= 3);
        CHECK(fx.motion_blur.kernel_length <= 15);
        CHECK(fx.lighting.brightness >= -30.0);
        CHECK(fx.lighting.brightness <= 30.0);
        CHECK(fx.lighting.contrast >= 0.7);
        CHECK(fx.lighting.gamma <= 1.5);
        CHECK(fx.compression.quality >= 30);
        CHECK(fx.compression.quality <= 95);
        enabled += fx.motion_blur.enabled;
    }
    CHECK(enabled > 150);
    CHECK(enabled < 250);
}
