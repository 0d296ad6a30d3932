#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segface/geometry.hpp"
#include "segface/image.hpp"

namespace segface {

enum class Split { Train, Test };

struct AnnotatedFrame {
    std::string image;               // path as written in the annotation file
    std::optional<BBox> gt_face;     // absent on no-face frames
    Split split = Split::Test;
    std::optional<int> width;        // frame dims, when the file records them
    std::optional<int> height;
    double visible_fraction = 1.0;   // of the pre-crop face, 1 when uncropped
    std::int64_t frame_id = 0;       // line index
};

// JSON lines: {"image": str, "face": [x1,y1,x2,y2] | null, optional "split":
// "train"|"test", optional "width"/"height", optional "visible_frac"}.
// Unknown fields are ignored. Frames without an explicit split get a seeded
// 20/80 train/test assignment. Malformed lines and invalid boxes raise with
// the offending line number / frame.
std::vector<AnnotatedFrame> load_annotations(const std::filesystem::path& path,
                                             std::uint64_t split_seed = 0,
                                             double train_fraction = 0.2);

void save_annotations(const std::vector<AnnotatedFrame>& frames, const std::filesystem::path& path);

// Procedural desk-scale scenes: a high-contrast face glyph (elliptical head
// with eye, nose and mouth landmarks) over clutter, optionally pushed past a
// frame border to crop it. Ground truth is the visible (clipped) box.
struct SynthSpec {
    int frame_count = 500;
    double no_face_fraction = 0.2;
    int width = 320;
    int height = 180;
    double cropped_fraction = 0.3;  // of face frames
    double min_crop = 0.25;         // cropped-away fraction of the face, per frame
    double max_crop = 0.5;
    double clutter_density = 6.0;   // shapes per frame
    double min_face_scale = 0.35;   // face height relative to frame height
    double max_face_scale = 0.8;
    std::uint64_t seed = 1;
};

// Renders one frame and returns its annotation (image path left empty).
// Deterministic in (spec.seed, frame_index); frames are independent.
std::pair<GrayImage, AnnotatedFrame> render_synth_frame(const SynthSpec& spec, int frame_index);

// Writes images/frame_NNNNNN.pgm, annotations.jsonl and manifest.json under
// out_dir and returns the annotations. The manifest records frame counts,
// the generation seed (doubling as the default split seed, since the
// annotation file leaves splits to the loader) and, when given, the
// resolved configuration of the generating run.
std::vector<AnnotatedFrame> synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir,
                                          const std::map<std::string, std::string>* run_config = nullptr);

}  // namespace segface
