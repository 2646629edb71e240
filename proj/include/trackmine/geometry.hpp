#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace trackmine {

/// Axis-aligned box in pixel coordinates, top-left origin: (x, y, w, h).
/// Width and height are strictly positive and all fields finite.
class BoundingBox {
public:
    BoundingBox() = default;
    BoundingBox(double x, double y, double w, double h) : x_(x), y_(y), w_(w), h_(h) {
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h))
            throw std::invalid_argument("BoundingBox: non-finite coordinate");
        if (!(w > 0.0) || !(h > 0.0))
            throw std::invalid_argument("BoundingBox: width and height must be positive");
    }

    static BoundingBox from_center(double cx, double cy, double w, double h) {
        return BoundingBox(cx - 0.5 * w, cy - 0.5 * h, w, h);
    }

    double x() const { return x_; }
    double y() const { return y_; }
    double w() const { return w_; }
    double h() const { return h_; }
    double right() const { return x_ + w_; }
    double bottom() const { return y_ + h_; }
    double cx() const { return x_ + 0.5 * w_; }
    double cy() const { return y_ + 0.5 * h_; }
    double area() const { return w_ * h_; }

    bool contains(const BoundingBox& other) const {
        return other.x_ >= x_ && other.y_ >= y_ && other.right() <= right() &&
               other.bottom() <= bottom();
    }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

private:
    double x_ = 0.0;
    double y_ = 0.0;
    double w_ = 1.0;
    double h_ = 1.0;
};

/// Area of the overlap of two boxes, 0 when disjoint or touching.
double intersection_area(const BoundingBox& a, const BoundingBox& b);

/// Overlap of two boxes, nullopt when the overlap has zero area.
std::optional<BoundingBox> intersect(const BoundingBox& a, const BoundingBox& b);

double iou(const BoundingBox& a, const BoundingBox& b);

/// Box regression deltas between two boxes, unscaled:
/// dx, dy are center shifts normalized by the source size, dw, dh are log size ratios.
struct MotionTarget {
    double dx = 0.0;
    double dy = 0.0;
    double dw = 0.0;
    double dh = 0.0;

    friend bool operator==(const MotionTarget&, const MotionTarget&) = default;
};

MotionTarget encode_motion_target(const BoundingBox& src, const BoundingBox& dst);
BoundingBox decode_motion_target(const BoundingBox& src, const MotionTarget& t);

/// Region sharing the box center with `scale` times its width and height.
BoundingBox context_region(const BoundingBox& box, double scale = 2.0);

}  // namespace trackmine
