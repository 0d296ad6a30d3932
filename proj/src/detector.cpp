#include "segface/detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "segface/rng.hpp"

namespace segface {

int lbp_code(const IntegralImage& ii, const LbpBlock& block) {
    const int cw = block.cell_w;
    const int ch = block.cell_h;
    if (cw < 1 || ch < 1 || block.x < 0 || block.y < 0 ||
        block.x + 3 * cw > ii.width() || block.y + 3 * ch > ii.height())
        throw std::invalid_argument("lbp_code: block out of bounds");

    std::uint64_t cell[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const int x = block.x + c * cw;
            const int y = block.y + r * ch;
            cell[r][c] = ii.rect_sum(x, y, x + cw, y + ch);
        }

    // Clockwise from top-left; all cells have equal area so the
    // cross-multiplication reduces to a sum comparison, kept explicit.
    static constexpr int order[8][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {2, 0}, {1, 0}};
    const std::uint64_t center = cell[1][1];
    int code = 0;
    for (int i = 0; i < 8; ++i)
        if (cell[order[i][0]][order[i][1]] >= center) code |= 1 << i;
    return code;
}

namespace {

struct ScaledWeak {
    LbpBlock block;  // window-relative
    const std::array<double, 256>* votes;
};

struct ScaledStage {
    double threshold;
    std::vector<ScaledWeak> weaks;
};

std::vector<ScaledStage> scale_stages(const CascadeModel& model, double s, int win_w, int win_h) {
    std::vector<ScaledStage> out;
    out.reserve(model.stages.size());
    for (const CascadeStage& stage : model.stages) {
        ScaledStage ss{stage.threshold, {}};
        ss.weaks.reserve(stage.weaks.size());
        for (const WeakClassifier& weak : stage.weaks) {
            LbpBlock b;
            b.cell_w = std::clamp<int>(static_cast<int>(std::lround(weak.block.cell_w * s)), 1, win_w / 3);
            b.cell_h = std::clamp<int>(static_cast<int>(std::lround(weak.block.cell_h * s)), 1, win_h / 3);
            b.x = std::clamp<int>(static_cast<int>(std::lround(weak.block.x * s)), 0, win_w - 3 * b.cell_w);
            b.y = std::clamp<int>(static_cast<int>(std::lround(weak.block.y * s)), 0, win_h - 3 * b.cell_h);
            ss.weaks.push_back({b, &weak.votes});
        }
        out.push_back(std::move(ss));
    }
    return out;
}

}  // namespace

std::vector<SegmentDetection> cascade_detect(const CascadeModel& model, const GrayImage& img,
                                             double scale_factor, int min_size, int step) {
    if (model.stages.empty()) throw std::invalid_argument("cascade_detect: model has no stages");
    if (model.window_w < 3 || model.window_h < 3)
        throw std::invalid_argument("cascade_detect: window smaller than one LBP block");
    if (!(scale_factor > 1.0)) throw std::invalid_argument("cascade_detect: scale_factor must be > 1");
    if (min_size == 0) min_size = model.window_w;
    if (min_size < model.window_w) throw std::invalid_argument("cascade_detect: min_size below model window");
    if (step == 0) step = std::max(1, model.window_w / 8);

    std::vector<SegmentDetection> dets;
    if (img.empty()) return dets;
    const IntegralImage ii(img);

    const double s0 = static_cast<double>(min_size) / model.window_w;
    for (double s = s0;; s *= scale_factor) {
        const int win_w = static_cast<int>(std::lround(model.window_w * s));
        const int win_h = static_cast<int>(std::lround(model.window_h * s));
        if (win_w > img.width || win_h > img.height) break;
        const int stride = std::max(1, static_cast<int>(std::lround(step * (s / s0))));
        const auto stages = scale_stages(model, s, win_w, win_h);

        for (int wy = 0; wy + win_h <= img.height; wy += stride) {
            for (int wx = 0; wx + win_w <= img.width; wx += stride) {
                double margin = 0.0;
                bool pass = true;
                for (const ScaledStage& stage : stages) {
                    double sum = 0.0;
                    for (const ScaledWeak& weak : stage.weaks) {
                        LbpBlock b = weak.block;
                        b.x += wx;
                        b.y += wy;
                        sum += (*weak.votes)[lbp_code(ii, b)];
                    }
                    if (!(sum >= stage.threshold)) {
                        pass = false;
                        break;
                    }
                    margin = sum - stage.threshold;
                }
                if (pass) {
                    dets.push_back({model.kind,
                                    {static_cast<double>(wx), static_cast<double>(wy),
                                     static_cast<double>(wx + win_w), static_cast<double>(wy + win_h)},
                                    margin});
                }
            }
        }
    }
    return dets;
}

std::vector<SegmentDetection> merge_overlapping(std::vector<SegmentDetection> dets, double iou_threshold) {
    if (iou_threshold <= 0.0 || dets.size() < 2) return dets;
    const std::size_t n = dets.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dets[i].kind == dets[j].kind && iou(dets[i].box, dets[j].box) >= iou_threshold)
                parent[find(i)] = find(j);

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

    std::vector<SegmentDetection> merged;
    merged.reserve(groups.size());
    for (const auto& [root, members] : groups) {
        BBox acc{0, 0, 0, 0};
        std::optional<double> best;
        for (std::size_t i : members) {
            acc.x1 += dets[i].box.x1;
            acc.y1 += dets[i].box.y1;
            acc.x2 += dets[i].box.x2;
            acc.y2 += dets[i].box.y2;
            if (dets[i].raw_score && (!best || *dets[i].raw_score > *best)) best = dets[i].raw_score;
        }
        const double k = static_cast<double>(members.size());
        merged.push_back({dets[root].kind, {acc.x1 / k, acc.y1 / k, acc.x2 / k, acc.y2 / k}, best});
    }
    sort_detections(merged);
    return merged;
}

std::vector<SegmentDetection> fixture_detect(const FixtureDetectorConfig& cfg,
                                             std::span<const SegmentKind> kinds,
                                             const std::optional<BBox>& gt_face,
                                             std::int64_t frame_id, int img_w, int img_h,
                                             const CanonicalRects& canonical) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(frame_id)));
    std::vector<SegmentDetection> dets;

    if (gt_face && gt_face->area() > 0.0) {
        for (SegmentKind kind : kinds) {
            const BBox seg = canonical_sub_box(kind, *gt_face, canonical);
            const double jx = cfg.center_jitter_sd * seg.width();
            const double jy = cfg.center_jitter_sd * seg.height();
            // Fixed draw count per kind keeps the stream aligned whether or
            // not the detection is dropped.
            BBox b{seg.x1 + rng.gaussian() * jx, seg.y1 + rng.gaussian() * jy,
                   seg.x2 + rng.gaussian() * jx, seg.y2 + rng.gaussian() * jy};
            const bool miss = rng.bernoulli(cfg.miss_rate);
            if (miss) continue;
            if (b.x1 > b.x2) std::swap(b.x1, b.x2);
            if (b.y1 > b.y2) std::swap(b.y1, b.y2);
            b.x1 = std::clamp(b.x1, 0.0, static_cast<double>(img_w));
            b.x2 = std::clamp(b.x2, 0.0, static_cast<double>(img_w));
            b.y1 = std::clamp(b.y1, 0.0, static_cast<double>(img_h));
            b.y2 = std::clamp(b.y2, 0.0, static_cast<double>(img_h));
            if (b.width() <= 0.0 || b.height() <= 0.0) continue;
            dets.push_back({kind, b, std::nullopt});
        }
    }

    if (!kinds.empty()) {
        int fp_count = static_cast<int>(cfg.false_positive_rate);
        if (rng.bernoulli(cfg.false_positive_rate - fp_count)) ++fp_count;
        const double base = std::min(img_w, img_h);
        for (int i = 0; i < fp_count; ++i) {
            const SegmentKind kind = kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1))];
            const double w = rng.uniform(0.10, 0.40) * base;
            const double h = w * rng.uniform(0.70, 1.40);
            const double x1 = rng.uniform(0.0, std::max(1.0, img_w - w));
            const double y1 = rng.uniform(0.0, std::max(1.0, img_h - h));
            BBox b{x1, y1, std::min(x1 + w, static_cast<double>(img_w)), std::min(y1 + h, static_cast<double>(img_h))};
            if (b.width() <= 0.0 || b.height() <= 0.0) continue;
            dets.push_back({kind, b, std::nullopt});
        }
    }

    sort_detections(dets);
    return dets;
}

std::vector<SegmentDetection> FixtureBackend::detect(const GrayImage& frame,
                                                     std::span<const SegmentKind> kinds,
                                                     std::int64_t frame_id) const {
    return fixture_detect(cfg_, kinds, gt_lookup_ ? gt_lookup_(frame_id) : std::nullopt, frame_id,
                          frame.width, frame.height, canonical_);
}

CascadeBackend CascadeBackend::from_directory(const std::filesystem::path& dir, ScanParams scan,
                                              double merge_iou) {
    std::map<SegmentKind, CascadeModel> models;
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("cascade backend: not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        CascadeModel m = load_cascade_model(entry.path());
        models[m.kind] = std::move(m);
    }
    if (models.empty()) throw std::runtime_error("cascade backend: no model files in " + dir.string());
    return CascadeBackend(std::move(models), scan, merge_iou);
}

std::vector<SegmentDetection> CascadeBackend::detect(const GrayImage& frame,
                                                     std::span<const SegmentKind> kinds,
                                                     std::int64_t /*frame_id*/) const {
    std::vector<SegmentDetection> all;
    for (SegmentKind kind : kinds) {
        const auto it = models_.find(kind);
        if (it == models_.end()) continue;
        auto dets = cascade_detect(it->second, frame, scan_.scale_factor,
                                   scan_.min_size ? scan_.min_size : it->second.window_w, scan_.step);
        dets = merge_overlapping(std::move(dets), merge_iou_);
        all.insert(all.end(), dets.begin(), dets.end());
    }
    sort_detections(all);
    return all;
}

void sort_detections(std::vector<SegmentDetection>& dets) {
    std::sort(dets.begin(), dets.end(), [](const SegmentDetection& a, const SegmentDetection& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.box.x1 != b.box.x1) return a.box.x1 < b.box.x1;
        if (a.box.y1 != b.box.y1) return a.box.y1 < b.box.y1;
        if (a.box.x2 != b.box.x2) return a.box.x2 < b.box.x2;
        return a.box.y2 < b.box.y2;
    });
}

// ---- model JSON ----

namespace {
using nlohmann::json;
}

CascadeModel load_cascade_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_cascade_model: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("load_cascade_model: " + path.string() + ": " + e.what());
    }
    CascadeModel m;
    const auto kind = segment_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("load_cascade_model: unknown kind in " + path.string());
    m.kind = *kind;
    m.window_w = j.at("window").at(0).get<int>();
    m.window_h = j.at("window").at(1).get<int>();
    if (m.window_w < 3 || m.window_h < 3)
        throw std::runtime_error("load_cascade_model: bad window in " + path.string());
    for (const json& js : j.at("stages")) {
        CascadeStage stage;
        stage.threshold = js.at("threshold").get<double>();
        for (const json& jw : js.at("weaks")) {
            WeakClassifier weak;
            const json& r = jw.at("rects");
            weak.block = {r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>(), r.at(3).get<int>()};
            if (weak.block.cell_w < 1 || weak.block.cell_h < 1 || weak.block.x < 0 || weak.block.y < 0 ||
                weak.block.x + 3 * weak.block.cell_w > m.window_w ||
                weak.block.y + 3 * weak.block.cell_h > m.window_h)
                throw std::runtime_error("load_cascade_model: block outside window in " + path.string());
            const json& votes = jw.at("votes");
            if (votes.size() != 256)
                throw std::runtime_error("load_cascade_model: vote table must have 256 entries in " + path.string());
            for (std::size_t i = 0; i < 256; ++i) weak.votes[i] = votes.at(i).get<double>();
            stage.weaks.push_back(std::move(weak));
        }
        if (stage.weaks.empty())
            throw std::runtime_error("load_cascade_model: stage without weak classifiers in " + path.string());
        m.stages.push_back(std::move(stage));
    }
    if (m.stages.empty()) throw std::runtime_error("load_cascade_model: no stages in " + path.string());
    return m;
}

void save_cascade_model(const CascadeModel& model, const std::filesystem::path& path) {
    json stages = json::array();
    for (const CascadeStage& stage : model.stages) {
        json weaks = json::array();
        for (const WeakClassifier& weak : stage.weaks) {
            weaks.push_back({{"rects", {weak.block.x, weak.block.y, weak.block.cell_w, weak.block.cell_h}},
                             {"votes", weak.votes}});
        }
        stages.push_back({{"threshold", stage.threshold}, {"weaks", std::move(weaks)}});
    }
    const json j = {{"kind", to_string(model.kind)},
                    {"window", {model.window_w, model.window_h}},
                    {"stages", std::move(stages)}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_cascade_model: cannot open " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace segface
