#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "segface/config.hpp"
#include "segface/dataset.hpp"
#include "segface/evaluation.hpp"
#include "segface/model_io.hpp"
#include "segface/pipeline.hpp"

namespace segface {

// Instantiates the configured detector backend. The fixture backend reads
// ground truth from the annotations, scaled into preprocessed-frame
// coordinates.
std::unique_ptr<SegmentDetectorBackend> make_backend(const PipelineConfig& cfg,
                                                     const std::vector<AnnotatedFrame>& frames);

// Resolves an annotation's image path against the annotation file's
// directory (absolute paths pass through).
std::filesystem::path resolve_image_path(const std::filesystem::path& image_root,
                                         const std::string& image);

// Runs the full training phase over the train split: propose, label at
// delta, build probability tables, featurize, fit the linear model.
ModelFile train_pipeline(const PipelineConfig& cfg, const std::vector<AnnotatedFrame>& frames,
                         const std::filesystem::path& image_root);

struct RunOutcome {
    std::vector<FrameOutcome> outcomes;  // frame order
    std::vector<double> frame_ms;        // detect_face wall clock, frame order
};

// Detects on every frame of the selected split (all frames when split is
// empty). Outcomes carry raw argmax scores when sweep_scores is true
// (theta overridden to -inf, for curve computation); otherwise config theta
// applies. Deterministic regardless of cfg.jobs.
RunOutcome run_frames(const PipelineConfig& cfg, const ProbabilityTables& tables,
                      const LinearModel& model, const std::vector<AnnotatedFrame>& frames,
                      const std::filesystem::path& image_root, std::optional<Split> split,
                      bool sweep_scores);

// Re-thresholds sweep outcomes at theta: detections scoring below it are
// dropped (and correctness recomputed accordingly).
std::vector<FrameOutcome> apply_theta(std::vector<FrameOutcome> outcomes, double theta);

}  // namespace segface
