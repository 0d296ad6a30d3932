#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "segface/classifier.hpp"
#include "segface/dataset.hpp"
#include "segface/detector.hpp"

namespace segface {

// The complete resolved configuration of a pipeline run. Every field has
// the documented default and every field can be overridden by a config-file
// key or a key=value argument.
struct PipelineConfig {
    DetectionConfig detection;

    std::string backend = "fixture";  // "fixture" | "cascade"
    FixtureDetectorConfig fixture;    // fixture.seed follows detection.seed unless set
    std::string cascade_dir;
    ScanParams scan;
    double merge_iou = 0.3;

    double svm_lambda = 1e-4;
    int svm_epochs = 200;

    SynthSpec synth;
    std::uint64_t split_seed = 0;  // 0: follow detection.seed
    int jobs = 1;

    std::uint64_t effective_split_seed() const { return split_seed ? split_seed : detection.seed; }
};

using KeyValues = std::map<std::string, std::string>;

// Flat key = value file; '#' starts a comment; values may be quoted.
KeyValues read_config_file(const std::filesystem::path& path);

// Defaults overridden by the given keys; throws on unknown keys or
// unparsable values. "kinds" accepts C0, Cbest or a comma list of kind
// names; canon_<KIND> overrides a canonical rectangle with four commas-
// separated unit coordinates.
PipelineConfig config_from_map(const KeyValues& kv);

// Fully resolved, round-trips through config_from_map. Used to log the
// effective configuration into run artifacts.
KeyValues config_to_map(const PipelineConfig& cfg);

}  // namespace segface
