#include "trackmine/hallucinate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <opencv2/imgproc.hpp>

namespace trackmine {

void ZoomConfig::validate() const {
    if (frames < 2) throw std::invalid_argument("zoom: at least 2 frames required");
    if (!(final_scale > 0.0 && final_scale <= 1.0))
        throw std::invalid_argument("zoom: final scale must lie in (0, 1]");
    if (!std::isfinite(pan_x) || !std::isfinite(pan_y))
        throw std::invalid_argument("zoom: pan must be finite");
    if (output_size.width < 0 || output_size.height < 0)
        throw std::invalid_argument("zoom: output size must be non-negative");
}

std::vector<BoundingBox> zoom_schedule(const ZoomConfig& cfg, ImageSize image) {
    cfg.validate();
    if (image.width <= 0 || image.height <= 0) throw std::invalid_argument("zoom: empty image");
    const BoundingBox full(0.0, 0.0, image.width, image.height);
    constexpr double kSlack = 1e-9;

    std::vector<BoundingBox> windows;
    windows.reserve(cfg.frames);
    for (int t = 0; t < cfg.frames; ++t) {
        const double s = 1.0 + (cfg.final_scale - 1.0) * t / (cfg.frames - 1);
        const double cx = 0.5 * image.width + cfg.pan_x * t;
        const double cy = 0.5 * image.height + cfg.pan_y * t;
        const auto w = t == 0 ? full : BoundingBox::from_center(cx, cy, image.width * s, image.height * s);
        if (w.x() < -kSlack || w.y() < -kSlack || w.right() > image.width + kSlack ||
            w.bottom() > image.height + kSlack)
            throw std::invalid_argument("zoom: window " + std::to_string(t) + " leaves the image");
        windows.push_back(w);
    }
    if (cfg.direction == ZoomDirection::zoom_out) std::reverse(windows.begin(), windows.end());
    return windows;
}

BoundingBox window_transform(const BoundingBox& box, const BoundingBox& window, ImageSize output) {
    const double sx = output.width / window.w();
    const double sy = output.height / window.h();
    return BoundingBox((box.x() - window.x()) * sx, (box.y() - window.y()) * sy, box.w() * sx, box.h() * sy);
}

namespace {

cv::Mat render_window(const cv::Mat& image, const BoundingBox& window, ImageSize output) {
    const double sx = output.width / window.w();
    const double sy = output.height / window.h();
    // Pixel centers sit at integer coordinates in OpenCV, half a pixel off
    // the continuous box coordinates.
    const cv::Matx23d m(sx, 0.0, (0.5 - window.x()) * sx - 0.5,
                        0.0, sy, (0.5 - window.y()) * sy - 0.5);
    cv::Mat out;
    cv::warpAffine(image, out, m, cv::Size(output.width, output.height), cv::INTER_LINEAR,
                   cv::BORDER_REPLICATE);
    return out;
}

}  // namespace

HallucinatedVideo hallucinate_video(const cv::Mat& image, const std::vector<BoundingBox>& boxes,
                                    const ZoomConfig& zoom, const EffectConfig& fx,
                                    const std::string& source_id, double fps) {
    if (image.empty()) throw std::invalid_argument("hallucinate: empty image");
    fx.validate();
    const ImageSize source{image.cols, image.rows};
    const BoundingBox bounds(0.0, 0.0, source.width, source.height);
    for (const auto& b : boxes) {
        if (!bounds.contains(b)) throw std::invalid_argument("hallucinate: box outside the image");
    }
    const ImageSize output = zoom.output_size.width > 0 && zoom.output_size.height > 0 ? zoom.output_size : source;
    const BoundingBox frame_bounds(0.0, 0.0, output.width, output.height);

    HallucinatedVideo video;
    video.source_id = source_id;
    video.fps = fps;
    video.windows = zoom_schedule(zoom, source);

    std::vector<cv::Mat> raw;
    raw.reserve(video.windows.size());
    for (const auto& w : video.windows) raw.push_back(render_window(image, w, output));
    video.frames = apply_effect_pipeline(raw, fx);

    for (std::size_t k = 0; k < boxes.size(); ++k) {
        HvTrack track;
        track.id = static_cast<int>(k) + 1;
        for (int t = 0; t < static_cast<int>(video.windows.size()); ++t) {
            const auto& window = video.windows[t];
            HvAnnotation a;
            a.frame = t;
            a.transformed = window_transform(boxes[k], window, output);
            const double kept = intersection_area(boxes[k], window) / boxes[k].area();
            if (kept >= kMinVisibleFraction) a.box = intersect(a.transformed, frame_bounds);
            track.annotations.push_back(a);
        }
        video.tracks.push_back(std::move(track));
    }
    return video;
}

ZoomConfig sample_zoom(Rng& rng, int frames, double min_scale) {
    ZoomConfig cfg;
    cfg.frames = frames;
    cfg.final_scale = rng.uniform(min_scale, 1.0);
    cfg.direction = rng.bernoulli(0.5) ? ZoomDirection::zoom_in : ZoomDirection::zoom_out;
    return cfg;
}

}  // namespace trackmine
