#pragma once

#include <cstdint>
#include <vector>

#include <opencv2/core.hpp>

#include "trackmine/rng.hpp"

namespace trackmine {

struct MotionBlurEffect {
    bool enabled = false;
    int kernel_length = 1;  ///< pixels; lengths <= 1 leave the frame untouched
    double angle_deg = 0.0;
    bool ramp = true;  ///< grow the kernel linearly from 1 to kernel_length over the video
};

struct LightingEffect {
    bool enabled = false;
    double brightness = 0.0;  ///< added after contrast, in intensity levels
    double contrast = 1.0;    ///< scale about mid-gray 128
    double gamma = 1.0;       ///< applied first on [0, 1] intensities
};

struct CompressionEffect {
    bool enabled = false;
    int quality = 95;  ///< JPEG quality, 1..100
    int jitter = 0;    ///< per-frame uniform quality offset in [-jitter, jitter]
};

/// Photometric effects for one video. The default value disables everything.
struct EffectConfig {
    MotionBlurEffect motion_blur;
    LightingEffect lighting;
    CompressionEffect compression;
    std::uint64_t seed = 0;

    bool is_identity() const {
        return !motion_blur.enabled && !lighting.enabled && !compression.enabled;
    }
    void validate() const;
};

/// Ranges used when effects are drawn at random per video.
struct EffectRanges {
    double enable_probability = 0.5;
    int blur_min = 3, blur_max = 15;
    double brightness_min = -30.0, brightness_max = 30.0;
    double contrast_min = 0.7, contrast_max = 1.3;
    double gamma_min = 0.7, gamma_max = 1.5;
    int quality_min = 30, quality_max = 95;
    int quality_jitter = 5;
};

EffectConfig sample_effects(Rng& rng, const EffectRanges& ranges = {});

/// Normalized line kernel of the given length and orientation.
cv::Mat motion_blur_kernel(int length, double angle_deg);

/// Lighting, then motion blur, then JPEG round trip, frame by frame. Frame
/// count, size and type are unchanged; the output depends only on the
/// inputs and fx.seed.
std::vector<cv::Mat> apply_effect_pipeline(const std::vector<cv::Mat>& frames, const EffectConfig& fx);

}  // namespace trackmine
