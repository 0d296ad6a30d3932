#pragma once

#include <cstdint>
#include <optional>

#include "segface/classifier.hpp"
#include "segface/detector.hpp"
#include "segface/image.hpp"

namespace segface {

struct DetectionResult {
    BBox box;  // in input-frame coordinates
    double score = 0.0;
};

// Everything the per-frame pipeline produces up to (unscored) proposals,
// in preprocessed-frame coordinates. Shared by training and detection.
struct FrameProposals {
    std::vector<SegmentDetection> detections;
    std::vector<FaceEstimate> estimates;  // parallel to detections
    std::vector<Cluster> clusters;
    std::vector<Proposal> proposals;      // all clusters, cluster-major
    int frame_w = 0;                      // preprocessed dims
    int frame_h = 0;
};

// Preprocesses per the config (downsample, CLAHE).
GrayImage preprocess(const GrayImage& frame, const DetectionConfig& config);

// Runs detect -> extrapolate -> min-face filter -> cluster -> propose on an
// already-preprocessed frame. Proposal sampling is seeded from
// (config.seed, frame_id, anchor index) so frames are independent.
FrameProposals propose_frame(const GrayImage& preprocessed, const SegmentDetectorBackend& backend,
                             const DetectionConfig& config, std::int64_t frame_id);

// Full single-frame detection: preprocess, propose, featurize, score, and
// return the best-scoring proposal's box (mapped back to input-frame
// coordinates) iff its score is >= config.theta. Ties go to the larger
// proposal area, then lexicographic box order. theta_override replaces
// config.theta when given (used by evaluation sweeps).
std::optional<DetectionResult> detect_face(const GrayImage& frame,
                                           const SegmentDetectorBackend& backend,
                                           const ProbabilityTables& tables, const LinearModel& model,
                                           const DetectionConfig& config, std::int64_t frame_id,
                                           std::optional<double> theta_override = std::nullopt);

}  // namespace segface
