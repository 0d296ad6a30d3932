#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "segface/geometry.hpp"
#include "segface/image.hpp"

namespace segface {

// One firing of one segment detector.
struct SegmentDetection {
    SegmentKind kind = SegmentKind::EP;
    BBox box;
    std::optional<double> raw_score;  // cascade margin, when available
};

// 3x3 grid of equal cells; (x,y) is the grid's top-left corner.
struct LbpBlock {
    int x = 0;
    int y = 0;
    int cell_w = 1;
    int cell_h = 1;
};

// Multi-block LBP code in [0,255]. Bit i is set iff the mean of the i-th
// surrounding cell is >= the mean of the center cell, cells ordered
// clockwise from the top-left. Ties set the bit, so a flat region codes 255.
// Means are compared by cross-multiplying sums with areas; no division.
int lbp_code(const IntegralImage& ii, const LbpBlock& block);

struct WeakClassifier {
    LbpBlock block;
    std::array<double, 256> votes;  // vote per LBP code
};

struct CascadeStage {
    double threshold = 0.0;
    std::vector<WeakClassifier> weaks;
};

struct CascadeModel {
    SegmentKind kind = SegmentKind::EP;
    int window_w = 0;
    int window_h = 0;
    std::vector<CascadeStage> stages;
};

// JSON model file: {kind, window:[w,h], stages:[{threshold,
// weaks:[{rects:[x,y,cw,ch], votes:[256 doubles]}]}]}.
CascadeModel load_cascade_model(const std::filesystem::path& path);
void save_cascade_model(const CascadeModel& model, const std::filesystem::path& path);

// Multi-scale sliding-window scan. Window sizes start at min_size (which
// must be >= the model window) and grow by scale_factor until they exceed
// the image. step is the horizontal/vertical stride in pixels at the
// min_size level and scales with the window; 0 picks window_w/8. A window
// passes when every stage's weak-vote sum is >= the stage threshold;
// raw_score is the final stage's margin. No merging is applied here.
std::vector<SegmentDetection> cascade_detect(const CascadeModel& model, const GrayImage& img,
                                             double scale_factor, int min_size, int step = 0);

// Groups detections whose boxes overlap transitively with pairwise
// IoU >= iou_threshold and averages their corners; the merged raw_score is
// the group's maximum. iou_threshold <= 0 returns the input unchanged.
std::vector<SegmentDetection> merge_overlapping(std::vector<SegmentDetection> dets, double iou_threshold);

// Deterministic test double for the trained segment detectors: emits the
// canonical sub-rectangle of the ground-truth face per requested kind,
// jittered, dropped, and padded with false positives per the config.
struct FixtureDetectorConfig {
    double miss_rate = 0.0;            // per-segment drop probability
    double false_positive_rate = 0.0;  // expected false boxes per frame
    double center_jitter_sd = 0.0;     // corner noise, fraction of segment size
    std::uint64_t seed = 0;
};

std::vector<SegmentDetection> fixture_detect(const FixtureDetectorConfig& cfg,
                                             std::span<const SegmentKind> kinds,
                                             const std::optional<BBox>& gt_face,
                                             std::int64_t frame_id, int img_w, int img_h,
                                             const CanonicalRects& canonical = default_canonical_rects());

// Pluggable per-frame segment detector. Implementations normalize output
// order (kind, then x1, y1) so frame-level parallelism cannot change results.
class SegmentDetectorBackend {
public:
    virtual ~SegmentDetectorBackend() = default;
    virtual std::vector<SegmentDetection> detect(const GrayImage& frame,
                                                 std::span<const SegmentKind> kinds,
                                                 std::int64_t frame_id) const = 0;
};

// Annotation-driven fixture backend; gt_lookup returns the face box in the
// same coordinate space as the frames handed to detect().
class FixtureBackend final : public SegmentDetectorBackend {
public:
    using GtLookup = std::function<std::optional<BBox>(std::int64_t frame_id)>;

    FixtureBackend(FixtureDetectorConfig cfg, GtLookup gt_lookup,
                   CanonicalRects canonical = default_canonical_rects())
        : cfg_(cfg), gt_lookup_(std::move(gt_lookup)), canonical_(canonical) {}

    std::vector<SegmentDetection> detect(const GrayImage& frame, std::span<const SegmentKind> kinds,
                                         std::int64_t frame_id) const override;

private:
    FixtureDetectorConfig cfg_;
    GtLookup gt_lookup_;
    CanonicalRects canonical_;
};

struct ScanParams {
    double scale_factor = 1.2;
    int min_size = 0;  // 0: the model's window size
    int step = 0;      // 0: window_w / 8
};

class CascadeBackend final : public SegmentDetectorBackend {
public:
    CascadeBackend(std::map<SegmentKind, CascadeModel> models, ScanParams scan, double merge_iou = 0.3)
        : models_(std::move(models)), scan_(scan), merge_iou_(merge_iou) {}

    // Loads every *.json cascade in the directory.
    static CascadeBackend from_directory(const std::filesystem::path& dir, ScanParams scan,
                                         double merge_iou = 0.3);

    std::vector<SegmentDetection> detect(const GrayImage& frame, std::span<const SegmentKind> kinds,
                                         std::int64_t frame_id) const override;

private:
    std::map<SegmentKind, CascadeModel> models_;
    ScanParams scan_;
    double merge_iou_;
};

// Canonical detection order: kind, then corners.
void sort_detections(std::vector<SegmentDetection>& dets);

}  // namespace segface
