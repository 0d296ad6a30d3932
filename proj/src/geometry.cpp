#include "segface/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace segface {

double iou(const BBox& a, const BBox& b) {
    const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

BBox enclosing_box(std::span<const BBox> boxes) {
    if (boxes.empty()) throw std::invalid_argument("enclosing_box: empty list");
    BBox out = boxes.front();
    for (const BBox& b : boxes.subspan(1)) {
        out.x1 = std::min(out.x1, b.x1);
        out.y1 = std::min(out.y1, b.y1);
        out.x2 = std::max(out.x2, b.x2);
        out.y2 = std::max(out.y2, b.y2);
    }
    return out;
}

namespace {

constexpr std::array<const char*, kSegmentKindCount> kKindNames = {
    "EP", "UL12", "U12", "UR12", "UL34", "U34", "UR34",
    "L12", "L34", "NS", "R34", "R12", "B34", "B12",
};

constexpr std::array<SegmentKind, kSegmentKindCount> kAllKinds = {
    SegmentKind::EP,   SegmentKind::UL12, SegmentKind::U12, SegmentKind::UR12,
    SegmentKind::UL34, SegmentKind::U34,  SegmentKind::UR34, SegmentKind::L12,
    SegmentKind::L34,  SegmentKind::NS,   SegmentKind::R34, SegmentKind::R12,
    SegmentKind::B34,  SegmentKind::B12,
};

// The half and three-fourth crops follow from the segment names; the
// eye-pair and nose rectangles are tunable estimates.
constexpr CanonicalRects kDefaultCanonical = {{
    {0.125, 0.20, 0.875, 0.45},  // EP
    {0.00, 0.00, 0.50, 0.50},    // UL12
    {0.00, 0.00, 1.00, 0.50},    // U12
    {0.50, 0.00, 1.00, 0.50},    // UR12
    {0.00, 0.00, 0.75, 0.75},    // UL34
    {0.00, 0.00, 1.00, 0.75},    // U34
    {0.25, 0.00, 1.00, 0.75},    // UR34
    {0.00, 0.00, 0.50, 1.00},    // L12
    {0.00, 0.00, 0.75, 1.00},    // L34
    {0.35, 0.35, 0.65, 0.75},    // NS
    {0.25, 0.00, 1.00, 1.00},    // R34
    {0.50, 0.00, 1.00, 1.00},    // R12
    {0.00, 0.25, 1.00, 1.00},    // B34
    {0.00, 0.50, 1.00, 1.00},    // B12
}};

}  // namespace

const char* to_string(SegmentKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<SegmentKind> segment_kind_from_string(const std::string& name) {
    for (int i = 0; i < kSegmentKindCount; ++i)
        if (name == kKindNames[i]) return static_cast<SegmentKind>(i);
    return std::nullopt;
}

std::span<const SegmentKind> all_segment_kinds() { return kAllKinds; }

const CanonicalRects& default_canonical_rects() { return kDefaultCanonical; }

FaceEstimate estimate_full_face(SegmentKind kind, const BBox& seg, double img_w, double img_h,
                                const CanonicalRects& canonical) {
    if (!(seg.width() > 0.0) || !(seg.height() > 0.0))
        throw std::invalid_argument("estimate_full_face: degenerate segment box");
    const UnitRect& u = canonical[static_cast<int>(kind)];
    if (!(u.u2 > u.u1) || !(u.v2 > u.v1))
        throw std::invalid_argument("estimate_full_face: degenerate canonical rectangle");

    const double face_w = seg.width() / (u.u2 - u.u1);
    const double face_h = seg.height() / (u.v2 - u.v1);
    BBox unclamped;
    unclamped.x1 = seg.x1 - u.u1 * face_w;
    unclamped.y1 = seg.y1 - u.v1 * face_h;
    unclamped.x2 = unclamped.x1 + face_w;
    unclamped.y2 = unclamped.y1 + face_h;

    FaceEstimate est;
    est.unclamped = unclamped;
    est.face.x1 = std::clamp(unclamped.x1, 0.0, img_w);
    est.face.y1 = std::clamp(unclamped.y1, 0.0, img_h);
    est.face.x2 = std::clamp(unclamped.x2, 0.0, img_w);
    est.face.y2 = std::clamp(unclamped.y2, 0.0, img_h);
    est.center_x = (unclamped.x1 + unclamped.x2) / 2.0;
    est.center_y = (unclamped.y1 + unclamped.y2) / 2.0;
    est.source_kind = kind;
    est.half_diagonal = 0.5 * std::hypot(face_w, face_h);
    return est;
}

BBox canonical_sub_box(SegmentKind kind, const BBox& face, const CanonicalRects& canonical) {
    const UnitRect& u = canonical[static_cast<int>(kind)];
    const double w = face.width();
    const double h = face.height();
    return {face.x1 + u.u1 * w, face.y1 + u.v1 * h, face.x1 + u.u2 * w, face.y1 + u.v2 * h};
}

}  // namespace segface
