#include "segface/runner.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "segface/pgm.hpp"

namespace segface {

std::unique_ptr<SegmentDetectorBackend> make_backend(const PipelineConfig& cfg,
                                                     const std::vector<AnnotatedFrame>& frames) {
    if (cfg.backend == "cascade") {
        if (cfg.cascade_dir.empty())
            throw std::runtime_error("cascade backend requires cascade_dir");
        return std::make_unique<CascadeBackend>(
            CascadeBackend::from_directory(cfg.cascade_dir, cfg.scan, cfg.merge_iou));
    }

    // Fixture ground truth lives in input-frame coordinates; the detector
    // sees preprocessed frames, so scale accordingly.
    const double inv = 1.0 / static_cast<double>(cfg.detection.downsample_factor);
    auto gt_by_id = std::make_shared<std::map<std::int64_t, BBox>>();
    for (const AnnotatedFrame& f : frames)
        if (f.gt_face)
            (*gt_by_id)[f.frame_id] = {f.gt_face->x1 * inv, f.gt_face->y1 * inv,
                                       f.gt_face->x2 * inv, f.gt_face->y2 * inv};
    auto lookup = [gt_by_id](std::int64_t frame_id) -> std::optional<BBox> {
        const auto it = gt_by_id->find(frame_id);
        if (it == gt_by_id->end()) return std::nullopt;
        return it->second;
    };
    return std::make_unique<FixtureBackend>(cfg.fixture, std::move(lookup), cfg.detection.canonical);
}

std::filesystem::path resolve_image_path(const std::filesystem::path& image_root,
                                         const std::string& image) {
    const std::filesystem::path p(image);
    return p.is_absolute() ? p : image_root / p;
}

ModelFile train_pipeline(const PipelineConfig& cfg, const std::vector<AnnotatedFrame>& frames,
                         const std::filesystem::path& image_root) {
    const auto backend = make_backend(cfg, frames);
    const double inv = 1.0 / static_cast<double>(cfg.detection.downsample_factor);

    std::vector<std::uint32_t> masks;
    std::vector<int> labels;
    std::vector<std::uint32_t> pos_sets, neg_sets;
    std::int64_t train_frames = 0;

    for (const AnnotatedFrame& frame : frames) {
        if (frame.split != Split::Train) continue;
        ++train_frames;
        const GrayImage img = read_pgm(resolve_image_path(image_root, frame.image));
        const GrayImage pre = preprocess(img, cfg.detection);
        const FrameProposals fp = propose_frame(pre, *backend, cfg.detection, frame.frame_id);

        std::optional<BBox> gtap;
        if (frame.gt_face)
            gtap = BBox{frame.gt_face->x1 * inv, frame.gt_face->y1 * inv,
                        frame.gt_face->x2 * inv, frame.gt_face->y2 * inv};
        const auto [pos, neg] = label_proposals(fp.proposals, gtap, cfg.detection.delta);
        for (const Proposal& p : pos) {
            masks.push_back(p.kind_mask);
            labels.push_back(+1);
            pos_sets.push_back(p.kind_mask);
        }
        for (const Proposal& p : neg) {
            masks.push_back(p.kind_mask);
            labels.push_back(-1);
            neg_sets.push_back(p.kind_mask);
        }
    }
    if (train_frames == 0) throw std::runtime_error("train: no frames in the train split");

    ModelFile mf;
    mf.config = cfg;
    mf.tables = build_tables(pos_sets, neg_sets, cfg.detection.laplace_alpha);

    // Features depend only on the kind set, so they are derived from the
    // recorded masks.
    std::vector<std::vector<double>> X;
    X.reserve(masks.size());
    Proposal scratch;
    for (std::uint32_t mask : masks) {
        scratch.kind_mask = mask;
        X.push_back(featurize(scratch, mf.tables, cfg.detection));
    }
    mf.model = train_linear(X, labels, cfg.svm_lambda, cfg.svm_epochs, cfg.detection.seed);
    return mf;
}

RunOutcome run_frames(const PipelineConfig& cfg, const ProbabilityTables& tables,
                      const LinearModel& model, const std::vector<AnnotatedFrame>& frames,
                      const std::filesystem::path& image_root, std::optional<Split> split,
                      bool sweep_scores) {
    std::vector<const AnnotatedFrame*> selected;
    for (const AnnotatedFrame& f : frames)
        if (!split || f.split == *split) selected.push_back(&f);

    RunOutcome out;
    out.outcomes.resize(selected.size());
    out.frame_ms.resize(selected.size());

    const std::optional<double> theta_override =
        sweep_scores ? std::optional<double>(-std::numeric_limits<double>::infinity()) : std::nullopt;

    const auto backend = make_backend(cfg, frames);
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const auto worker = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t i = begin; i < end; ++i) {
                const AnnotatedFrame& frame = *selected[i];
                const GrayImage img = read_pgm(resolve_image_path(image_root, frame.image));
                const auto t0 = std::chrono::steady_clock::now();
                const auto det = detect_face(img, *backend, tables, model, cfg.detection,
                                             frame.frame_id, theta_override);
                const auto t1 = std::chrono::steady_clock::now();
                out.frame_ms[i] = std::chrono::duration<double, std::milli>(t1 - t0).count();
                out.outcomes[i] = evaluate_frame(frame.frame_id, frame.gt_face, det, cfg.detection.delta);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || selected.size() < 2) {
        worker(0, selected.size());
    } else {
        const std::size_t n = selected.size();
        const std::size_t chunk = (n + jobs - 1) / static_cast<std::size_t>(jobs);
        std::vector<std::thread> threads;
        for (std::size_t begin = 0; begin < n; begin += chunk)
            threads.emplace_back(worker, begin, std::min(begin + chunk, n));
        for (auto& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

std::vector<FrameOutcome> apply_theta(std::vector<FrameOutcome> outcomes, double theta) {
    for (FrameOutcome& o : outcomes) {
        if (o.detection && !(o.detection->score >= theta)) {
            o.detection.reset();
            o.correct = false;
        }
    }
    return outcomes;
}

}  // namespace segface
