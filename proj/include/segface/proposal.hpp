#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "segface/clustering.hpp"

namespace segface {

// An anchor-containing subset of a cluster with the enclosing box of its
// members' estimated faces. kind_mask has bit int(kind) set per member.
struct Proposal {
    int anchor_idx = 0;
    std::vector<int> member_idxs;  // ascending; includes the anchor
    std::uint32_t kind_mask = 0;
    BBox box;
    std::optional<double> score;
};

std::uint32_t kind_bit(SegmentKind kind);
std::vector<SegmentKind> kinds_in_mask(std::uint32_t mask);

// Up to zeta proposals from one cluster. Candidates are the anchor joined
// with each nonempty subset of the other members (2^m - 1 of them for m
// non-anchor members). All candidates are returned when they fit within
// zeta, in ascending subset-code order; otherwise zeta distinct subsets are
// sampled uniformly without replacement from the seeded generator, using
// O(zeta) memory. Deterministic given (cluster, rng_seed).
std::vector<Proposal> generate_proposals(const Cluster& cluster,
                                         std::span<const SegmentDetection> detections,
                                         std::span<const FaceEstimate> estimates,
                                         int zeta, std::uint64_t rng_seed);

}  // namespace segface
