#include "segface/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "segface/rng.hpp"

namespace segface {

std::pair<std::vector<Proposal>, std::vector<Proposal>> label_proposals(
    const std::vector<Proposal>& proposals, const std::optional<BBox>& gt_face, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("label_proposals: delta must be in (0,1)");
    std::vector<Proposal> pos, neg;
    for (const Proposal& p : proposals) {
        if (gt_face && iou(p.box, *gt_face) >= delta)
            pos.push_back(p);
        else
            neg.push_back(p);
    }
    return {std::move(pos), std::move(neg)};
}

ProbabilityTables build_tables(std::span<const std::uint32_t> positive_sets,
                               std::span<const std::uint32_t> negative_sets,
                               double laplace_alpha) {
    if (positive_sets.empty() && negative_sets.empty())
        throw std::invalid_argument("build_tables: no labeled proposals");
    if (positive_sets.empty())
        std::cerr << "segface: warning: no positive proposals; face probabilities are all zero\n";
    if (negative_sets.empty())
        std::cerr << "segface: warning: no negative proposals; non-face probabilities are all zero\n";

    ProbabilityTables t;
    t.n_pos = static_cast<std::int64_t>(positive_sets.size());
    t.n_neg = static_cast<std::int64_t>(negative_sets.size());

    std::map<std::uint32_t, std::pair<std::int64_t, std::int64_t>> set_counts;
    std::array<std::pair<std::int64_t, std::int64_t>, kSegmentKindCount> kind_counts{};
    for (std::uint32_t mask : positive_sets) {
        ++set_counts[mask].first;
        for (int i = 0; i < kSegmentKindCount; ++i)
            if (mask & (1u << i)) ++kind_counts[i].first;
    }
    for (std::uint32_t mask : negative_sets) {
        ++set_counts[mask].second;
        for (int i = 0; i < kSegmentKindCount; ++i)
            if (mask & (1u << i)) ++kind_counts[i].second;
    }

    const double a = laplace_alpha;
    const auto freq = [a](std::int64_t count, std::int64_t n) {
        const double denom = static_cast<double>(n) + 2.0 * a;
        return denom > 0.0 ? (count + a) / denom : 0.0;
    };
    for (const auto& [mask, counts] : set_counts)
        t.set_probs[mask] = {freq(counts.first, t.n_pos), freq(counts.second, t.n_neg)};
    for (int i = 0; i < kSegmentKindCount; ++i)
        t.kind_probs[i] = {freq(kind_counts[i].first, t.n_pos), freq(kind_counts[i].second, t.n_neg)};
    if (a > 0.0) {
        t.unseen_pt = freq(0, t.n_pos);
        t.unseen_pf = freq(0, t.n_neg);
    }
    return t;
}

std::vector<SegmentKind> kinds_c0() {
    return {all_segment_kinds().begin(), all_segment_kinds().end()};
}

std::vector<SegmentKind> kinds_cbest() {
    return normalize_kinds({SegmentKind::NS, SegmentKind::EP, SegmentKind::UL34, SegmentKind::UR34,
                            SegmentKind::U12, SegmentKind::L34, SegmentKind::UL12, SegmentKind::R12,
                            SegmentKind::L12});
}

std::vector<SegmentKind> normalize_kinds(std::vector<SegmentKind> kinds) {
    std::sort(kinds.begin(), kinds.end());
    kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
    return kinds;
}

std::vector<double> featurize(const Proposal& proposal, const ProbabilityTables& tables,
                              const DetectionConfig& config) {
    std::uint32_t active_mask = 0;
    for (SegmentKind k : config.active_kinds) active_mask |= kind_bit(k);
    if (proposal.kind_mask & ~active_mask)
        throw std::invalid_argument("featurize: proposal contains a kind outside the active configuration");

    std::vector<double> f;
    f.reserve(config.feature_size());
    const auto it = tables.set_probs.find(proposal.kind_mask);
    if (it != tables.set_probs.end()) {
        f.push_back(it->second.first);
        f.push_back(it->second.second);
    } else {
        f.push_back(tables.unseen_pt);
        f.push_back(tables.unseen_pf);
    }
    for (SegmentKind k : config.active_kinds) {
        if (proposal.kind_mask & kind_bit(k)) {
            f.push_back(tables.kind_probs[static_cast<int>(k)].first);
            f.push_back(tables.kind_probs[static_cast<int>(k)].second);
        } else {
            f.push_back(0.0);
            f.push_back(0.0);
        }
    }
    return f;
}

double score(const LinearModel& model, std::span<const double> features) {
    if (features.size() != model.weights.size())
        throw std::invalid_argument("score: feature length does not match model");
    double s = model.bias;
    for (std::size_t i = 0; i < features.size(); ++i) s += model.weights[i] * features[i];
    return s;
}

LinearModel train_linear(const std::vector<std::vector<double>>& features,
                         const std::vector<int>& labels, double lambda, int epochs,
                         std::uint64_t seed) {
    if (features.size() != labels.size() || features.empty())
        throw std::invalid_argument("train_linear: empty or mismatched training data");
    if (!(lambda > 0.0)) throw std::invalid_argument("train_linear: lambda must be positive");
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y > 0) has_pos = true;
        else has_neg = true;
    }
    if (!has_pos || !has_neg) throw std::invalid_argument("train_linear: both classes must be present");

    const std::size_t dim = features.front().size();
    for (const auto& x : features)
        if (x.size() != dim) throw std::invalid_argument("train_linear: inconsistent feature lengths");

    LinearModel model;
    model.weights.assign(dim, 0.0);
    model.bias = 0.0;

    std::vector<std::size_t> order(features.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    std::int64_t t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        // Fisher-Yates with our own generator; std::shuffle is not
        // reproducible across standard libraries.
        for (std::size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
        for (std::size_t idx : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const auto& x = features[idx];
            const double y = labels[idx] > 0 ? 1.0 : -1.0;
            double margin = model.bias;
            for (std::size_t i = 0; i < dim; ++i) margin += model.weights[i] * x[i];
            const double shrink = 1.0 - eta * lambda;
            if (y * margin < 1.0) {
                for (std::size_t i = 0; i < dim; ++i)
                    model.weights[i] = shrink * model.weights[i] + eta * y * x[i];
                model.bias += eta * y;
            } else {
                for (std::size_t i = 0; i < dim; ++i) model.weights[i] *= shrink;
            }
            // Pegasos projection onto the 1/sqrt(lambda) ball.
            double norm2 = 0.0;
            for (double w : model.weights) norm2 += w * w;
            const double cap2 = 1.0 / lambda;
            if (norm2 > cap2) {
                const double scale = std::sqrt(cap2 / norm2);
                for (double& w : model.weights) w *= scale;
            }
        }
    }
    return model;
}

}  // namespace segface
