#include "segface/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <set>
#include <stdexcept>

namespace segface {

FrameOutcome evaluate_frame(std::int64_t frame_id, const std::optional<BBox>& gt_face,
                            const std::optional<DetectionResult>& detection, double delta) {
    FrameOutcome o;
    o.frame_id = frame_id;
    o.gt_present = gt_face.has_value();
    o.detection = detection;
    o.correct = gt_face && detection && iou(detection->box, *gt_face) >= delta;
    return o;
}

ConfusionCounts confusion(std::span<const FrameOutcome> outcomes) {
    ConfusionCounts c;
    for (const FrameOutcome& o : outcomes) {
        if (o.gt_present) {
            if (o.correct) {
                ++c.tp;
            } else {
                ++c.fn;
                if (o.detection) ++c.fp;  // hallucinated elsewhere on a face frame
            }
        } else {
            if (o.detection)
                ++c.fp;
            else
                ++c.tn;
        }
    }
    return c;
}

double precision(const ConfusionCounts& c) {
    const std::int64_t denom = c.tp + c.fp;
    return denom > 0 ? static_cast<double>(c.tp) / denom : 0.0;
}

double recall(const ConfusionCounts& c) {
    const std::int64_t denom = c.tp + c.fn;
    return denom > 0 ? static_cast<double>(c.tp) / denom : 0.0;
}

double f1(const ConfusionCounts& c) {
    const std::int64_t denom = 2 * c.tp + c.fp + c.fn;
    if (denom == 0) {
        std::cerr << "segface: warning: F1 undefined (no detections or faces); reporting 0\n";
        return 0.0;
    }
    return 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

std::vector<CurvePoint> sweep_curve(std::span<const FrameOutcome> outcomes) {
    std::int64_t face_frames = 0, noface_frames = 0;
    std::set<double> thresholds;
    thresholds.insert(-std::numeric_limits<double>::infinity());
    thresholds.insert(std::numeric_limits<double>::infinity());
    for (const FrameOutcome& o : outcomes) {
        if (o.gt_present)
            ++face_frames;
        else
            ++noface_frames;
        if (o.detection) thresholds.insert(o.detection->score);
    }

    // Sorted by score so each threshold's counts come from suffix sums.
    struct Det {
        double score;
        bool on_face;
        bool correct;
    };
    std::vector<Det> dets;
    for (const FrameOutcome& o : outcomes)
        if (o.detection) dets.push_back({o.detection->score, o.gt_present, o.correct});
    std::sort(dets.begin(), dets.end(), [](const Det& a, const Det& b) { return a.score < b.score; });

    std::vector<CurvePoint> curve;
    curve.reserve(thresholds.size());
    for (double theta : thresholds) {
        // detections active at this threshold: score >= theta
        const auto first = std::lower_bound(dets.begin(), dets.end(), theta,
                                            [](const Det& d, double t) { return d.score < t; });
        std::int64_t tp = 0, fp_noface = 0, fp_face = 0;
        for (auto it = first; it != dets.end(); ++it) {
            if (it->correct)
                ++tp;
            else if (it->on_face)
                ++fp_face;
            else
                ++fp_noface;
        }
        CurvePoint p;
        p.theta = theta;
        p.counts.tp = tp;
        p.counts.fp = fp_noface + fp_face;
        p.counts.fn = face_frames - tp;
        p.counts.tn = noface_frames - fp_noface;
        p.precision = precision(p.counts);
        p.recall = recall(p.counts);
        p.tpr = face_frames > 0 ? static_cast<double>(tp) / face_frames : 0.0;
        p.fpr = noface_frames > 0 ? static_cast<double>(fp_noface) / noface_frames : 0.0;
        curve.push_back(p);
    }
    return curve;
}

std::optional<double> tpr_at_fpr(std::span<const FrameOutcome> outcomes, double fpr_target) {
    bool has_noface = false;
    for (const FrameOutcome& o : outcomes)
        if (!o.gt_present) has_noface = true;
    if (!has_noface) return std::nullopt;

    double best = 0.0;
    for (const CurvePoint& p : sweep_curve(outcomes))
        if (p.fpr <= fpr_target) best = std::max(best, p.tpr);
    return best;
}

std::optional<double> recall_at_precision(std::span<const FrameOutcome> outcomes,
                                          double precision_target) {
    std::optional<double> best;
    for (const CurvePoint& p : sweep_curve(outcomes)) {
        if (p.counts.tp + p.counts.fp == 0) continue;  // precision undefined
        if (p.precision >= precision_target && (!best || p.recall > *best)) best = p.recall;
    }
    return best;
}

TimingStats timing_stats(std::span<const double> frame_ms) {
    if (frame_ms.empty()) throw std::invalid_argument("timing_stats: no frames");
    std::vector<double> s(frame_ms.begin(), frame_ms.end());
    std::sort(s.begin(), s.end());
    TimingStats t;
    t.frames = static_cast<std::int64_t>(s.size());
    double sum = 0.0;
    for (double v : s) sum += v;
    t.mean_ms = sum / static_cast<double>(s.size());
    const std::size_t n = s.size();
    t.median_ms = (n % 2 == 1) ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
    const std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    t.p95_ms = s[std::max<std::size_t>(rank, 1) - 1];
    t.min_ms = s.front();
    t.max_ms = s.back();
    return t;
}

}  // namespace segface
