#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "segface/clustering.hpp"
#include "segface/proposal.hpp"

namespace segface {

// Empirical face / non-face frequencies over labeled training proposals.
// set_probs counts exact kind-set occurrences; kind_probs counts proposals
// containing each kind. Unsmoothed unless built with laplace_alpha > 0, in
// which case unseen_pt/unseen_pf hold the smoothed floor for unknown sets.
struct ProbabilityTables {
    std::map<std::uint32_t, std::pair<double, double>> set_probs;  // mask -> (pT, pF)
    std::array<std::pair<double, double>, kSegmentKindCount> kind_probs{};
    std::int64_t n_pos = 0;
    std::int64_t n_neg = 0;
    double unseen_pt = 0.0;
    double unseen_pf = 0.0;
};

// Splits proposals into (positives, negatives): positive iff a ground-truth
// face is present and iou(box, gt) >= delta.
std::pair<std::vector<Proposal>, std::vector<Proposal>> label_proposals(
    const std::vector<Proposal>& proposals, const std::optional<BBox>& gt_face, double delta);

// Builds tables from the kind-sets of positive and negative proposals.
// Throws if both partitions are empty; warns to stderr when one is (its
// probabilities are all zero).
ProbabilityTables build_tables(std::span<const std::uint32_t> positive_sets,
                               std::span<const std::uint32_t> negative_sets,
                               double laplace_alpha = 0.0);

// Which segment kinds participate, the decision thresholds, and everything
// the per-frame pipeline needs. active_kinds is kept in enumeration order;
// that order is the feature layout.
struct DetectionConfig {
    std::vector<SegmentKind> active_kinds;
    double theta = 0.0;  // minimum confidence for a detection
    double delta = 0.5;  // overlap threshold against ground truth
    int zeta = 20;       // proposal cap per cluster
    ClusterParams cluster;

    int downsample_factor = 4;
    int min_face_size = 64;  // in downsampled pixels, applied to unclamped estimates
    bool clahe_enabled = true;
    int clahe_tiles_x = 8;
    int clahe_tiles_y = 8;
    double clahe_clip = 2.0;
    bool clahe_before_downsample = false;
    CanonicalRects canonical = default_canonical_rects();
    double laplace_alpha = 0.0;
    std::uint64_t seed = 42;

    int feature_size() const { return 2 * static_cast<int>(active_kinds.size()) + 2; }
};

// All 14 kinds.
std::vector<SegmentKind> kinds_c0();
// The best-performing 9-kind subset: NS, EP, UL34, UR34, U12, L34, UL12, R12, L12.
std::vector<SegmentKind> kinds_cbest();
// Dedupes and sorts into enumeration order.
std::vector<SegmentKind> normalize_kinds(std::vector<SegmentKind> kinds);

// Feature vector of size 2n+2 for n active kinds:
// [pT(set), pF(set), then per active kind: pT(kind), pF(kind) when the kind
// is in the proposal, else exact zeros]. Kind-sets absent from the tables
// get the unseen floor (zero without smoothing).
std::vector<double> featurize(const Proposal& proposal, const ProbabilityTables& tables,
                              const DetectionConfig& config);

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
};

double score(const LinearModel& model, std::span<const double> features);

// Regularized hinge loss by seeded stochastic subgradient descent
// (step 1/(lambda*t), single-threaded, reproducible). labels are +1/-1;
// both classes must be present.
LinearModel train_linear(const std::vector<std::vector<double>>& features,
                         const std::vector<int>& labels, double lambda = 1e-4,
                         int epochs = 200, std::uint64_t seed = 42);

}  // namespace segface
