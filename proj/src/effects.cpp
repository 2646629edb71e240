#include "trackmine/effects.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace trackmine {

void EffectConfig::validate() const {
    if (motion_blur.enabled && motion_blur.kernel_length < 1)
        throw std::invalid_argument("effects: blur kernel length must be >= 1");
    if (lighting.enabled && (!(lighting.contrast > 0.0) || !(lighting.gamma > 0.0)))
        throw std::invalid_argument("effects: contrast and gamma must be positive");
    if (compression.enabled &&
        (compression.quality < 1 || compression.quality > 100 || compression.jitter < 0))
        throw std::invalid_argument("effects: JPEG quality must lie in [1, 100]");
}

EffectConfig sample_effects(Rng& rng, const EffectRanges& r) {
    EffectConfig fx;
    fx.motion_blur.enabled = rng.bernoulli(r.enable_probability);
    fx.motion_blur.kernel_length = rng.uniform_int(r.blur_min, r.blur_max);
    fx.motion_blur.angle_deg = rng.uniform(0.0, 180.0);
    fx.lighting.enabled = rng.bernoulli(r.enable_probability);
    fx.lighting.brightness = rng.uniform(r.brightness_min, r.brightness_max);
    fx.lighting.contrast = rng.uniform(r.contrast_min, r.contrast_max);
    fx.lighting.gamma = rng.uniform(r.gamma_min, r.gamma_max);
    fx.compression.enabled = rng.bernoulli(r.enable_probability);
    fx.compression.quality = rng.uniform_int(r.quality_min, r.quality_max);
    fx.compression.jitter = r.quality_jitter;
    fx.seed = rng.next();
    return fx;
}

cv::Mat motion_blur_kernel(int length, double angle_deg) {
    length = std::max(length, 1);
    cv::Mat kernel = cv::Mat::zeros(length, length, CV_32F);
    const double theta = angle_deg * std::numbers::pi / 180.0;
    const double c = (length - 1) / 2.0;
    for (int i = 0; i < length; ++i) {
        const double offset = i - c;
        const int x = std::clamp(static_cast<int>(std::lround(c + offset * std::cos(theta))), 0, length - 1);
        const int y = std::clamp(static_cast<int>(std::lround(c + offset * std::sin(theta))), 0, length - 1);
        kernel.at<float>(y, x) += 1.0f;
    }
    kernel /= cv::sum(kernel)[0];
    return kernel;
}

namespace {

cv::Mat lighting_lut(const LightingEffect& l) {
    cv::Mat lut(1, 256, CV_8U);
    for (int v = 0; v < 256; ++v) {
        const double g = 255.0 * std::pow(v / 255.0, l.gamma);
        const double out = (g - 128.0) * l.contrast + 128.0 + l.brightness;
        lut.at<std::uint8_t>(v) = static_cast<std::uint8_t>(std::clamp(std::lround(out), 0L, 255L));
    }
    return lut;
}

}  // namespace

std::vector<cv::Mat> apply_effect_pipeline(const std::vector<cv::Mat>& frames, const EffectConfig& fx) {
    fx.validate();
    std::vector<cv::Mat> out;
    out.reserve(frames.size());
    if (fx.is_identity()) {
        for (const auto& f : frames) out.push_back(f.clone());
        return out;
    }

    Rng rng(fx.seed);
    const cv::Mat lut = fx.lighting.enabled ? lighting_lut(fx.lighting) : cv::Mat();
    const int n = static_cast<int>(frames.size());
    for (int t = 0; t < n; ++t) {
        if (frames[t].depth() != CV_8U) throw std::invalid_argument("effects: frames must be 8-bit");
        cv::Mat frame = frames[t].clone();
        if (fx.lighting.enabled) cv::LUT(frame, lut, frame);

        if (fx.motion_blur.enabled) {
            int length = fx.motion_blur.kernel_length;
            if (fx.motion_blur.ramp && n > 1)
                length = 1 + static_cast<int>(std::lround((length - 1) * static_cast<double>(t) / (n - 1)));
            if (length > 1) {
                cv::filter2D(frame, frame, -1, motion_blur_kernel(length, fx.motion_blur.angle_deg),
                             cv::Point(-1, -1), 0.0, cv::BORDER_REFLECT);
            }
        }

        // Draw the jitter even when compression is off so streams stay aligned.
        const int jitter = fx.compression.jitter > 0
                               ? rng.uniform_int(-fx.compression.jitter, fx.compression.jitter)
                               : 0;
        if (fx.compression.enabled) {
            const int quality = std::clamp(fx.compression.quality + jitter, 1, 100);
            std::vector<std::uint8_t> buffer;
            cv::imencode(".jpg", frame, buffer, {cv::IMWRITE_JPEG_QUALITY, quality});
            frame = cv::imdecode(buffer, frame.channels() == 1 ? cv::IMREAD_GRAYSCALE : cv::IMREAD_COLOR);
        }
        out.push_back(std::move(frame));
    }
    return out;
}

}  // namespace trackmine
