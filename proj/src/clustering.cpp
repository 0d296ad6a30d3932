#include "segface/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace segface {

std::vector<Cluster> cluster_segments(std::span<const SegmentDetection> detections,
                                      std::span<const FaceEstimate> estimates,
                                      const ClusterParams& params) {
    if (detections.size() != estimates.size())
        throw std::invalid_argument("cluster_segments: detections/estimates size mismatch");
    if (params.min_cluster_size < 1 || !(params.radius_factor > 0.0))
        throw std::invalid_argument("cluster_segments: bad params");

    const int n = static_cast<int>(detections.size());
    std::vector<Cluster> clusters;

    for (int k = 0; k < n; ++k) {
        const double r = params.radius_factor * estimates[k].half_diagonal;
        const double r2 = r * r;

        // Best candidate per kind: nearest center to the anchor's, anchor
        // wins its own kind, ties to the lower index.
        int best_idx[kSegmentKindCount];
        double best_d2[kSegmentKindCount];
        for (int i = 0; i < kSegmentKindCount; ++i) best_idx[i] = -1;

        for (int j = 0; j < n; ++j) {
            const double dx = estimates[j].center_x - estimates[k].center_x;
            const double dy = estimates[j].center_y - estimates[k].center_y;
            const double d2 = dx * dx + dy * dy;
            if (d2 > r2) continue;
            const int kind = static_cast<int>(detections[j].kind);
            if (j == k) {
                best_idx[kind] = k;
                best_d2[kind] = -1.0;  // unbeatable
            } else if (best_idx[kind] < 0 || d2 < best_d2[kind]) {
                best_idx[kind] = j;
                best_d2[kind] = d2;
            }
        }

        Cluster cl;
        cl.center_idx = k;
        cl.radius = r;
        for (int i = 0; i < kSegmentKindCount; ++i)
            if (best_idx[i] >= 0) cl.member_idxs.push_back(best_idx[i]);
        std::sort(cl.member_idxs.begin(), cl.member_idxs.end());
        if (static_cast<int>(cl.member_idxs.size()) >= params.min_cluster_size)
            clusters.push_back(std::move(cl));
    }
    return clusters;
}

}  // namespace segface
