#include "trackmine/geometry.hpp"

#include <algorithm>

namespace trackmine {

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
    const double iw = std::min(a.right(), b.right()) - std::max(a.x(), b.x());
    const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y(), b.y());
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    return iw * ih;
}

std::optional<BoundingBox> intersect(const BoundingBox& a, const BoundingBox& b) {
    const double x0 = std::max(a.x(), b.x());
    const double y0 = std::max(a.y(), b.y());
    const double x1 = std::min(a.right(), b.right());
    const double y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) return std::nullopt;
    return BoundingBox(x0, y0, x1 - x0, y1 - y0);
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    if (a == b) return 1.0;
    const double inter = intersection_area(a, b);
    if (inter <= 0.0) return 0.0;
    const double uni = a.area() + b.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

MotionTarget encode_motion_target(const BoundingBox& src, const BoundingBox& dst) {
    return MotionTarget{
        (dst.cx() - src.cx()) / src.w(),
        (dst.cy() - src.cy()) / src.h(),
        std::log(dst.w() / src.w()),
        std::log(dst.h() / src.h()),
    };
}

BoundingBox decode_motion_target(const BoundingBox& src, const MotionTarget& t) {
    const double w = src.w() * std::exp(t.dw);
    const double h = src.h() * std::exp(t.dh);
    return BoundingBox::from_center(src.cx() + t.dx * src.w(), src.cy() + t.dy * src.h(), w, h);
}

BoundingBox context_region(const BoundingBox& box, double scale) {
    return BoundingBox::from_center(box.cx(), box.cy(), box.w() * scale, box.h() * scale);
}

}  // namespace trackmine
