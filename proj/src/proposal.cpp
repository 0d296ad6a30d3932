#include "segface/proposal.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "segface/rng.hpp"

namespace segface {

std::uint32_t kind_bit(SegmentKind kind) { return 1u << static_cast<int>(kind); }

std::vector<SegmentKind> kinds_in_mask(std::uint32_t mask) {
    std::vector<SegmentKind> kinds;
    for (int i = 0; i < kSegmentKindCount; ++i)
        if (mask & (1u << i)) kinds.push_back(static_cast<SegmentKind>(i));
    return kinds;
}

std::vector<Proposal> generate_proposals(const Cluster& cluster,
                                         std::span<const SegmentDetection> detections,
                                         std::span<const FaceEstimate> estimates,
                                         int zeta, std::uint64_t rng_seed) {
    if (zeta < 1) throw std::invalid_argument("generate_proposals: zeta must be >= 1");
    if (cluster.member_idxs.size() < 2)
        throw std::invalid_argument("generate_proposals: cluster has no non-anchor members");

    std::vector<int> others;
    others.reserve(cluster.member_idxs.size() - 1);
    for (int idx : cluster.member_idxs)
        if (idx != cluster.center_idx) others.push_back(idx);
    const int m = static_cast<int>(others.size());

    // Subset code: bit i selects others[i]. Members are deduplicated per
    // kind, so m <= 13 and codes fit comfortably in 64 bits.
    const std::uint64_t total = (std::uint64_t{1} << m) - 1;

    std::vector<std::uint64_t> codes;
    if (total <= static_cast<std::uint64_t>(zeta)) {
        codes.reserve(total);
        for (std::uint64_t c = 1; c <= total; ++c) codes.push_back(c);
    } else {
        // Floyd's sampling: zeta distinct codes from [1, total].
        Rng rng(rng_seed);
        std::set<std::uint64_t> picked;
        for (std::uint64_t top = total - zeta + 1; top <= total; ++top) {
            const std::uint64_t c = static_cast<std::uint64_t>(rng.uniform_int(1, static_cast<std::int64_t>(top)));
            picked.insert(picked.count(c) ? top : c);
        }
        codes.assign(picked.begin(), picked.end());
    }

    std::vector<Proposal> proposals;
    proposals.reserve(codes.size());
    std::vector<BBox> faces;
    for (std::uint64_t code : codes) {
        Proposal p;
        p.anchor_idx = cluster.center_idx;
        p.member_idxs.push_back(cluster.center_idx);
        for (int i = 0; i < m; ++i)
            if (code & (std::uint64_t{1} << i)) p.member_idxs.push_back(others[i]);
        std::sort(p.member_idxs.begin(), p.member_idxs.end());

        faces.clear();
        for (int idx : p.member_idxs) {
            p.kind_mask |= kind_bit(detections[idx].kind);
            faces.push_back(estimates[idx].face);
        }
        p.box = enclosing_box(faces);
        proposals.push_back(std::move(p));
    }
    return proposals;
}

}  // namespace segface
