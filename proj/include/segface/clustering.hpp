#pragma once

#include <span>
#include <vector>

#include "segface/detector.hpp"
#include "segface/geometry.hpp"

namespace segface {

struct ClusterParams {
    int min_cluster_size = 2;         // c
    double radius_factor = 1.0 / 6.0; // r as a fraction of the anchor's half-diagonal
};

// A detection k anchors a cluster of every detection whose estimated face
// center falls within radius r_k of k's estimated face center, deduplicated
// to one detection per segment kind.
struct Cluster {
    int center_idx = 0;
    std::vector<int> member_idxs;  // ascending; includes center_idx
    double radius = 0.0;           // r_k in pixels
};

// One candidate cluster per anchor detection k, with r_k = radius_factor *
// half_diagonal(k). Members are deduplicated per kind, keeping the one whose
// center is nearest to the anchor's (the anchor always keeps its own kind;
// remaining ties go to the lower index). Clusters smaller than
// min_cluster_size are discarded; output is sorted by center_idx.
//
// detections and estimates are parallel arrays (estimates[i] extrapolated
// from detections[i]).
std::vector<Cluster> cluster_segments(std::span<const SegmentDetection> detections,
                                      std::span<const FaceEstimate> estimates,
                                      const ClusterParams& params);

}  // namespace segface
