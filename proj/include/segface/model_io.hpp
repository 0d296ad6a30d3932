#pragma once

#include <filesystem>

#include "segface/classifier.hpp"
#include "segface/config.hpp"

namespace segface {

// Trained model bundle: linear weights, probability tables and the resolved
// configuration they were trained under.
struct ModelFile {
    LinearModel model;
    ProbabilityTables tables;
    PipelineConfig config;
};

inline constexpr int kModelFormatVersion = 1;

// JSON with format_version, active_kinds (by name, in feature order),
// weights, bias, tables (set probabilities keyed by sorted kind-name lists)
// and train_config. Round trips exactly; loading validates the version and
// that the weight length matches 2n+2 for the declared kinds.
void save_model(const ModelFile& mf, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace segface
