#include "segface/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "segface/rng.hpp"

namespace segface {

namespace {
using nlohmann::json;
}

std::vector<AnnotatedFrame> load_annotations(const std::filesystem::path& path,
                                             std::uint64_t split_seed, double train_fraction) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_annotations: cannot open " + path.string());

    std::vector<AnnotatedFrame> frames;
    std::vector<std::size_t> unsplit;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("load_annotations: " + path.string() + ":" +
                                     std::to_string(lineno) + ": " + e.what());
        }
        AnnotatedFrame f;
        f.frame_id = static_cast<std::int64_t>(frames.size());
        try {
            f.image = j.at("image").get<std::string>();
            const json& face = j.at("face");
            if (!face.is_null()) {
                if (!face.is_array() || face.size() != 4)
                    throw std::runtime_error("face must be [x1,y1,x2,y2] or null");
                BBox b{face.at(0).get<double>(), face.at(1).get<double>(),
                       face.at(2).get<double>(), face.at(3).get<double>()};
                if (!b.valid() || !(b.area() > 0.0)) throw std::runtime_error("degenerate face box");
                f.gt_face = b;
            }
            if (j.contains("width")) f.width = j.at("width").get<int>();
            if (j.contains("height")) f.height = j.at("height").get<int>();
            if (j.contains("visible_frac")) f.visible_fraction = j.at("visible_frac").get<double>();
            if (f.gt_face && f.width && f.height) {
                const BBox& b = *f.gt_face;
                if (b.x1 < 0 || b.y1 < 0 || b.x2 > *f.width || b.y2 > *f.height)
                    throw std::runtime_error("face box outside image bounds");
            }
            if (j.contains("split")) {
                const std::string s = j.at("split").get<std::string>();
                if (s == "train")
                    f.split = Split::Train;
                else if (s == "test")
                    f.split = Split::Test;
                else
                    throw std::runtime_error("split must be \"train\" or \"test\"");
            } else {
                unsplit.push_back(frames.size());
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("load_annotations: " + path.string() + ":" +
                                     std::to_string(lineno) + " (" + f.image + "): " + e.what());
        }
        frames.push_back(std::move(f));
    }

    if (!unsplit.empty()) {
        Rng rng(mix_seed(split_seed, 0x517D5EEDull));
        for (std::size_t i = unsplit.size() - 1; i > 0; --i)
            std::swap(unsplit[i], unsplit[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
        const auto n_train =
            static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(unsplit.size())));
        for (std::size_t i = 0; i < unsplit.size(); ++i)
            frames[unsplit[i]].split = i < n_train ? Split::Train : Split::Test;
    }
    return frames;
}

void save_annotations(const std::vector<AnnotatedFrame>& frames, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_annotations: cannot open " + path.string());
    for (const AnnotatedFrame& f : frames) {
        json j;
        j["image"] = f.image;
        if (f.gt_face)
            j["face"] = {f.gt_face->x1, f.gt_face->y1, f.gt_face->x2, f.gt_face->y2};
        else
            j["face"] = nullptr;
        j["split"] = f.split == Split::Train ? "train" : "test";
        if (f.width) j["width"] = *f.width;
        if (f.height) j["height"] = *f.height;
        if (f.visible_fraction != 1.0) j["visible_frac"] = f.visible_fraction;
        out << j.dump() << "\n";
    }
    if (!out) throw std::runtime_error("save_annotations: write failed for " + path.string());
}

}  // namespace segface
