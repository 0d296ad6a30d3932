#include "segface/pipeline.hpp"

#include <algorithm>

#include "segface/clahe.hpp"
#include "segface/rng.hpp"

namespace segface {

GrayImage preprocess(const GrayImage& frame, const DetectionConfig& config) {
    if (config.clahe_enabled && config.clahe_before_downsample) {
        GrayImage eq = clahe(frame, config.clahe_tiles_x, config.clahe_tiles_y, config.clahe_clip);
        return downsample(eq, config.downsample_factor);
    }
    GrayImage small = downsample(frame, config.downsample_factor);
    if (config.clahe_enabled)
        small = clahe(small, std::min(config.clahe_tiles_x, small.width),
                      std::min(config.clahe_tiles_y, small.height), config.clahe_clip);
    return small;
}

FrameProposals propose_frame(const GrayImage& preprocessed, const SegmentDetectorBackend& backend,
                             const DetectionConfig& config, std::int64_t frame_id) {
    FrameProposals out;
    out.frame_w = preprocessed.width;
    out.frame_h = preprocessed.height;

    const auto raw = backend.detect(preprocessed, config.active_kinds, frame_id);
    for (const SegmentDetection& det : raw) {
        if (!(det.box.area() > 0.0)) continue;
        FaceEstimate est = estimate_full_face(det.kind, det.box, preprocessed.width,
                                              preprocessed.height, config.canonical);
        if (std::min(est.unclamped.width(), est.unclamped.height()) < config.min_face_size) continue;
        out.detections.push_back(det);
        out.estimates.push_back(est);
    }

    out.clusters = cluster_segments(out.detections, out.estimates, config.cluster);
    for (const Cluster& cl : out.clusters) {
        const std::uint64_t seed =
            mix_seed(mix_seed(config.seed, static_cast<std::uint64_t>(frame_id)),
                     static_cast<std::uint64_t>(cl.center_idx));
        auto props = generate_proposals(cl, out.detections, out.estimates, config.zeta, seed);
        out.proposals.insert(out.proposals.end(), std::make_move_iterator(props.begin()),
                             std::make_move_iterator(props.end()));
    }
    return out;
}

std::optional<DetectionResult> detect_face(const GrayImage& frame,
                                           const SegmentDetectorBackend& backend,
                                           const ProbabilityTables& tables, const LinearModel& model,
                                           const DetectionConfig& config, std::int64_t frame_id,
                                           std::optional<double> theta_override) {
    const GrayImage pre = preprocess(frame, config);
    FrameProposals fp = propose_frame(pre, backend, config, frame_id);
    if (fp.proposals.empty()) return std::nullopt;

    const Proposal* best = nullptr;
    double best_score = 0.0;
    for (Proposal& p : fp.proposals) {
        const auto f = featurize(p, tables, config);
        p.score = score(model, f);
        if (!best) {
            best = &p;
            best_score = *p.score;
            continue;
        }
        const double s = *p.score;
        if (s > best_score) {
            best = &p;
            best_score = s;
        } else if (s == best_score) {
            const double pa = p.box.area();
            const double ba = best->box.area();
            const auto key = [](const BBox& b) { return std::array<double, 4>{b.x1, b.y1, b.x2, b.y2}; };
            if (pa > ba || (pa == ba && key(p.box) < key(best->box))) {
                best = &p;
                best_score = s;
            }
        }
    }

    const double theta = theta_override.value_or(config.theta);
    if (!(best_score >= theta)) return std::nullopt;

    const double f = static_cast<double>(config.downsample_factor);
    DetectionResult res;
    res.box = {best->box.x1 * f, best->box.y1 * f, best->box.x2 * f, best->box.y2 * f};
    res.score = best_score;
    return res;
}

}  // namespace segface
