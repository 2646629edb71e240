#pragma once

#include <optional>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "trackmine/effects.hpp"
#include "trackmine/geometry.hpp"
#include "trackmine/rng.hpp"

namespace trackmine {

enum class ZoomDirection { zoom_in, zoom_out };

struct ImageSize {
    int width = 0;
    int height = 0;

    friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

struct ZoomConfig {
    int frames = 16;
    double final_scale = 1.0;  ///< side of the last crop window relative to the image, (0, 1]
    ZoomDirection direction = ZoomDirection::zoom_in;
    double pan_x = 0.0;  ///< window center drift per frame, pixels
    double pan_y = 0.0;
    ImageSize output_size;  ///< zero means the source size

    void validate() const;
};

/// Crop windows in source coordinates, one per frame. For zoom-in, window 0
/// is the full image and side ratios shrink linearly to final_scale while the
/// center drifts by the pan; zoom-out is the same list reversed. Throws
/// std::invalid_argument if any window leaves the image.
std::vector<BoundingBox> zoom_schedule(const ZoomConfig& cfg, ImageSize image);

/// Maps a source-space box into output pixels for one crop window.
BoundingBox window_transform(const BoundingBox& box, const BoundingBox& window, ImageSize output);

/// Boxes keeping less than this share of their area inside the window are invisible.
inline constexpr double kMinVisibleFraction = 0.25;

struct HvAnnotation {
    int frame = 0;
    BoundingBox transformed;          ///< exact window transform, unclipped
    std::optional<BoundingBox> box;   ///< clipped to the frame; set iff visible
    bool visible() const { return box.has_value(); }
};

struct HvTrack {
    int id = 0;
    std::vector<HvAnnotation> annotations;  ///< one per frame
};

struct HallucinatedVideo {
    std::string source_id;
    double fps = 30.0;
    std::vector<cv::Mat> frames;
    std::vector<BoundingBox> windows;
    std::vector<HvTrack> tracks;  ///< ids 1..n in input box order
};

/// Renders each window to the output size (bilinear resampling) and runs
/// the effect pipeline on the result. Boxes follow the same affine map as
/// the pixels. Throws std::invalid_argument for an invalid config or a box
/// outside the image.
HallucinatedVideo hallucinate_video(const cv::Mat& image, const std::vector<BoundingBox>& boxes,
                                    const ZoomConfig& zoom, const EffectConfig& fx,
                                    const std::string& source_id = {}, double fps = 30.0);

/// Random zoom parameters: final scale uniform in [min_scale, 1], direction by coin flip.
ZoomConfig sample_zoom(Rng& rng, int frames = 16, double min_scale = 0.3);

}  // namespace trackmine
