#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "segface/dataset.hpp"
#include "segface/pgm.hpp"
#include "segface/rng.hpp"

namespace segface {

namespace {

void fill_rect(GrayImage& img, double x1, double y1, double x2, double y2, std::uint8_t v) {
    const int ix1 = std::max(0, static_cast<int>(std::floor(x1)));
    const int iy1 = std::max(0, static_cast<int>(std::floor(y1)));
    const int ix2 = std::min(img.width, static_cast<int>(std::ceil(x2)));
    const int iy2 = std::min(img.height, static_cast<int>(std::ceil(y2)));
    for (int y = iy1; y < iy2; ++y)
        for (int x = ix1; x < ix2; ++x) img.at(x, y) = v;
}

void fill_ellipse(GrayImage& img, double cx, double cy, double rx, double ry, std::uint8_t v) {
    if (rx <= 0.0 || ry <= 0.0) return;
    const int iy1 = std::max(0, static_cast<int>(std::floor(cy - ry)));
    const int iy2 = std::min(img.height, static_cast<int>(std::ceil(cy + ry)));
    for (int y = iy1; y < iy2; ++y) {
        const double dy = (y + 0.5 - cy) / ry;
        const double span = 1.0 - dy * dy;
        if (span <= 0.0) continue;
        const double half = rx * std::sqrt(span);
        const int x1 = std::max(0, static_cast<int>(std::floor(cx - half)));
        const int x2 = std::min(img.width, static_cast<int>(std::ceil(cx + half)));
        for (int x = x1; x < x2; ++x)
            if (std::abs(x + 0.5 - cx) <= half) img.at(x, y) = v;
    }
}

// Per-frame roles are assigned up front so each frame renders independently.
struct FramePlan {
    bool has_face = false;
    bool cropped = false;
};

std::vector<FramePlan> plan_frames(const SynthSpec& spec) {
    std::vector<FramePlan> plan(spec.frame_count);
    std::vector<int> idx(spec.frame_count);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(mix_seed(spec.seed, 0xA110CA7Eull));
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);

    const int n_noface = static_cast<int>(std::llround(spec.no_face_fraction * spec.frame_count));
    for (int i = 0; i < spec.frame_count; ++i) plan[idx[i]].has_face = i >= n_noface;

    std::vector<int> face_frames;
    for (int i = 0; i < spec.frame_count; ++i)
        if (plan[i].has_face) face_frames.push_back(i);
    for (std::size_t i = face_frames.size(); i > 1; --i)
        std::swap(face_frames[i - 1],
                  face_frames[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    const int n_cropped =
        static_cast<int>(std::llround(spec.cropped_fraction * static_cast<double>(face_frames.size())));
    for (int i = 0; i < n_cropped; ++i) plan[face_frames[i]].cropped = true;
    return plan;
}

void draw_face(GrayImage& img, const BBox& face, Rng& rng) {
    const double w = face.width();
    const double h = face.height();
    const auto at = [&](double u, double v) {
        return std::pair<double, double>{face.x1 + u * w, face.y1 + v * h};
    };
    const std::uint8_t skin = static_cast<std::uint8_t>(rng.uniform_int(175, 205));
    fill_ellipse(img, face.x1 + w / 2, face.y1 + h / 2, w / 2, h / 2, skin);

    const std::uint8_t eye = static_cast<std::uint8_t>(rng.uniform_int(30, 55));
    const auto [lx, ly] = at(0.30, 0.325);
    const auto [rx, ry] = at(0.70, 0.325);
    fill_ellipse(img, lx, ly, 0.09 * w, 0.055 * h, eye);
    fill_ellipse(img, rx, ry, 0.09 * w, 0.055 * h, eye);

    const auto [nx, ny] = at(0.5, 0.58);
    fill_rect(img, nx - 0.05 * w, ny - 0.12 * h, nx + 0.05 * w, ny + 0.08 * h,
              static_cast<std::uint8_t>(rng.uniform_int(110, 135)));

    const auto [mx, my] = at(0.5, 0.80);
    fill_rect(img, mx - 0.18 * w, my - 0.03 * h, mx + 0.18 * w, my + 0.03 * h,
              static_cast<std::uint8_t>(rng.uniform_int(50, 75)));
}

std::pair<GrayImage, AnnotatedFrame> render_planned(const SynthSpec& spec, int frame_index,
                                                    const FramePlan& plan) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(frame_index) + 1));

    GrayImage img(spec.width, spec.height, static_cast<std::uint8_t>(rng.uniform_int(25, 55)));

    const int clutter = static_cast<int>(std::llround(spec.clutter_density * rng.uniform(0.5, 1.5)));
    for (int i = 0; i < clutter; ++i) {
        const double cw = rng.uniform(0.05, 0.25) * spec.width;
        const double ch = rng.uniform(0.05, 0.25) * spec.height;
        const double x = rng.uniform(-cw / 2, spec.width - cw / 2);
        const double y = rng.uniform(-ch / 2, spec.height - ch / 2);
        const auto v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
        if (rng.bernoulli(0.5))
            fill_rect(img, x, y, x + cw, y + ch, v);
        else
            fill_ellipse(img, x + cw / 2, y + ch / 2, cw / 2, ch / 2, v);
    }

    AnnotatedFrame ann;
    ann.frame_id = frame_index;
    ann.width = spec.width;
    ann.height = spec.height;
    ann.split = Split::Test;

    if (plan.has_face) {
        const double fh = rng.uniform(spec.min_face_scale, spec.max_face_scale) * spec.height;
        const double fw = fh * rng.uniform(0.75, 0.95);
        BBox face;
        if (plan.cropped) {
            const double crop = rng.uniform(spec.min_crop, spec.max_crop);
            const int side = static_cast<int>(rng.uniform_int(0, 3));
            double x1 = rng.uniform(0.0, std::max(1.0, spec.width - fw));
            double y1 = rng.uniform(0.0, std::max(1.0, spec.height - fh));
            switch (side) {
                case 0: x1 = -crop * fw; break;                  // left
                case 1: x1 = spec.width - (1.0 - crop) * fw; break;  // right
                case 2: y1 = -crop * fh; break;                  // top
                default: y1 = spec.height - (1.0 - crop) * fh; break;  // bottom
            }
            face = {x1, y1, x1 + fw, y1 + fh};
        } else {
            const double x1 = rng.uniform(0.0, std::max(1.0, spec.width - fw));
            const double y1 = rng.uniform(0.0, std::max(1.0, spec.height - fh));
            face = {x1, y1, x1 + fw, y1 + fh};
        }
        draw_face(img, face, rng);

        BBox visible{std::clamp(face.x1, 0.0, static_cast<double>(spec.width)),
                     std::clamp(face.y1, 0.0, static_cast<double>(spec.height)),
                     std::clamp(face.x2, 0.0, static_cast<double>(spec.width)),
                     std::clamp(face.y2, 0.0, static_cast<double>(spec.height))};
        ann.gt_face = visible;
        ann.visible_fraction = visible.area() / face.area();
    }
    return {std::move(img), std::move(ann)};
}

}  // namespace

std::pair<GrayImage, AnnotatedFrame> render_synth_frame(const SynthSpec& spec, int frame_index) {
    if (spec.frame_count < 1 || spec.width < 16 || spec.height < 16)
        throw std::invalid_argument("render_synth_frame: bad spec");
    if (frame_index < 0 || frame_index >= spec.frame_count)
        throw std::invalid_argument("render_synth_frame: frame index out of range");
    return render_planned(spec, frame_index, plan_frames(spec)[frame_index]);
}

std::vector<AnnotatedFrame> synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir,
                                          const std::map<std::string, std::string>* run_config) {
    namespace fs = std::filesystem;
    if (spec.frame_count < 1 || spec.width < 16 || spec.height < 16)
        throw std::invalid_argument("synth_dataset: bad spec");
    fs::create_directories(out_dir / "images");
    const auto plan = plan_frames(spec);

    std::vector<AnnotatedFrame> frames;
    frames.reserve(spec.frame_count);
    int face_count = 0;
    for (int i = 0; i < spec.frame_count; ++i) {
        auto [img, ann] = render_planned(spec, i, plan[i]);
        char name[64];
        std::snprintf(name, sizeof(name), "images/frame_%06d.pgm", i);
        ann.image = name;
        write_pgm(img, out_dir / name);
        if (ann.gt_face) ++face_count;
        frames.push_back(std::move(ann));
    }

    // The annotation file carries no split; loaders assign it from their
    // split seed.
    {
        std::ofstream out(out_dir / "annotations.jsonl");
        if (!out) throw std::runtime_error("synth_dataset: cannot write annotations");
        for (const AnnotatedFrame& f : frames) {
            nlohmann::json j;
            j["image"] = f.image;
            if (f.gt_face)
                j["face"] = {f.gt_face->x1, f.gt_face->y1, f.gt_face->x2, f.gt_face->y2};
            else
                j["face"] = nullptr;
            j["width"] = *f.width;
            j["height"] = *f.height;
            if (f.visible_fraction != 1.0) j["visible_frac"] = f.visible_fraction;
            out << j.dump() << "\n";
        }
    }

    nlohmann::json manifest = {
        {"frame_count", spec.frame_count},
        {"face_frames", face_count},
        {"noface_frames", spec.frame_count - face_count},
        {"width", spec.width},
        {"height", spec.height},
        {"no_face_fraction", spec.no_face_fraction},
        {"cropped_fraction", spec.cropped_fraction},
        {"min_crop", spec.min_crop},
        {"max_crop", spec.max_crop},
        {"clutter_density", spec.clutter_density},
        {"min_face_scale", spec.min_face_scale},
        {"max_face_scale", spec.max_face_scale},
        {"seed", spec.seed},
        {"split_seed", spec.seed},
    };
    if (run_config) {
        nlohmann::json cfg = nlohmann::json::object();
        for (const auto& [k, v] : *run_config) cfg[k] = v;
        manifest["config"] = std::move(cfg);
    }
    std::ofstream mf(out_dir / "manifest.json");
    mf << manifest.dump(2) << "\n";
    return frames;
}

}  // namespace segface
