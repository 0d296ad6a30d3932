#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "segface/pipeline.hpp"

namespace segface {

// One evaluated frame: what the detector returned against what the
// annotation says. correct implies both a ground-truth face and a detection
// with iou >= delta.
struct FrameOutcome {
    std::int64_t frame_id = 0;
    bool gt_present = false;
    std::optional<DetectionResult> detection;
    bool correct = false;
};

FrameOutcome evaluate_frame(std::int64_t frame_id, const std::optional<BBox>& gt_face,
                            const std::optional<DetectionResult>& detection, double delta);

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

// Frame-level counts. A detection on a face frame that misses the face
// (iou < delta) counts as both a false positive and a false negative, so
// tp + fn always equals the number of face frames.
ConfusionCounts confusion(std::span<const FrameOutcome> outcomes);

double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);

// 2TP / (2TP + FP + FN); zero with a warning when the denominator is zero.
double f1(const ConfusionCounts& c);

// One point per swept threshold (every distinct score plus +/-inf); a
// frame's detection is active at threshold theta iff its score >= theta.
// FPR's denominator is the number of no-face frames.
struct CurvePoint {
    double theta = 0.0;
    ConfusionCounts counts;
    double precision = 0.0;
    double recall = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
};

std::vector<CurvePoint> sweep_curve(std::span<const FrameOutcome> outcomes);

// Max TPR among thresholds with FPR <= fpr_target; empty when there are no
// no-face frames (FPR undefined).
std::optional<double> tpr_at_fpr(std::span<const FrameOutcome> outcomes, double fpr_target = 0.01);

// Max recall among thresholds with precision >= precision_target (only
// thresholds that keep at least one detection qualify); empty when the
// target precision is never reached.
std::optional<double> recall_at_precision(std::span<const FrameOutcome> outcomes,
                                          double precision_target = 0.99);

struct TimingStats {
    std::int64_t frames = 0;
    double mean_ms = 0.0;
    double median_ms = 0.0;
    double p95_ms = 0.0;
    double min_ms = 0.0;
    double max_ms = 0.0;
};

// Order statistics over per-frame wall-clock times; p95 is nearest-rank.
TimingStats timing_stats(std::span<const double> frame_ms);

}  // namespace segface
