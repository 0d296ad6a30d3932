#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

namespace segface {

// Axis-aligned box with real-valued pixel corners (top-left, bottom-right).
// Rasterization to integer pixels happens only at I/O boundaries.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    bool valid() const { return x1 <= x2 && y1 <= y2; }

    bool operator==(const BBox&) const = default;
};

// Intersection-over-union. Zero when the boxes are disjoint or both have
// zero area; symmetric; always in [0,1].
double iou(const BBox& a, const BBox& b);

// Componentwise min of top-lefts, max of bottom-rights.
BBox enclosing_box(std::span<const BBox> boxes);

// The 14 facial segments. This enumeration order is the fixed feature
// layout order; model files record it by name.
enum class SegmentKind : int {
    EP,    // eye pair
    UL12,  // upper-left half
    U12,   // upper half
    UR12,  // upper-right half
    UL34,  // upper-left three-fourths
    U34,   // upper three-fourths
    UR34,  // upper-right three-fourths
    L12,   // left half
    L34,   // left three-fourths
    NS,    // nose
    R34,   // right three-fourths
    R12,   // right half
    B34,   // bottom three-fourths
    B12,   // bottom half
};

inline constexpr int kSegmentKindCount = 14;

const char* to_string(SegmentKind kind);
std::optional<SegmentKind> segment_kind_from_string(const std::string& name);

std::span<const SegmentKind> all_segment_kinds();

// Ideal position of a segment within a unit face square.
struct UnitRect {
    double u1, v1, u2, v2;
};

using CanonicalRects = std::array<UnitRect, kSegmentKindCount>;

const CanonicalRects& default_canonical_rects();

// A segment box extrapolated to the full face it implies.
struct FaceEstimate {
    BBox face;             // extrapolated face, clamped to the image
    BBox unclamped;        // extrapolated face before clamping
    double center_x = 0.0; // midpoint of the unclamped face
    double center_y = 0.0;
    SegmentKind source_kind = SegmentKind::EP;
    double half_diagonal = 0.0; // of the unclamped face
};

// Inverts the segment's canonical rectangle: the segment box is assumed to
// sit at its ideal position inside the face, which fixes the face's size
// and origin. The returned face box is clamped to [0,img_w] x [0,img_h];
// the center and half-diagonal come from the unclamped box.
FaceEstimate estimate_full_face(SegmentKind kind, const BBox& seg, double img_w, double img_h,
                                const CanonicalRects& canonical = default_canonical_rects());

// The segment box implied by a face box, i.e. the forward direction of
// estimate_full_face.
BBox canonical_sub_box(SegmentKind kind, const BBox& face,
                       const CanonicalRects& canonical = default_canonical_rects());

}  // namespace segface
