#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "segface/clahe.hpp"
#include "segface/clustering.hpp"
#include "segface/evaluation.hpp"
#include "segface/image.hpp"

namespace py = pybind11;
using namespace segface;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const U8Array& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D uint8 array (h, w)");
    GrayImage img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::memcpy(img.data.data(), arr.data(), img.data.size());
    return img;
}

py::array_t<std::uint8_t> from_image(const GrayImage& img) {
    py::array_t<std::uint8_t> arr({img.height, img.width});
    std::memcpy(arr.mutable_data(), img.data.data(), img.data.size());
    return arr;
}

BBox to_box(const py::sequence& s) {
    if (py::len(s) != 4) throw std::invalid_argument("a box is (x1, y1, x2, y2)");
    return {s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>(), s[3].cast<double>()};
}

py::tuple from_box(const BBox& b) { return py::make_tuple(b.x1, b.y1, b.x2, b.y2); }

SegmentKind to_kind(const std::string& name) {
    const auto k = segment_kind_from_string(name);
    if (!k) throw std::invalid_argument("unknown segment kind '" + name + "'");
    return *k;
}

std::vector<FrameOutcome> to_outcomes(const py::iterable& items) {
    // (gt_present, score-or-None, correct) per frame
    std::vector<FrameOutcome> outcomes;
    std::int64_t id = 0;
    for (py::handle h : items) {
        const py::sequence s = h.cast<py::sequence>();
        FrameOutcome o;
        o.frame_id = id++;
        o.gt_present = s[0].cast<bool>();
        if (!s[1].is_none()) o.detection = DetectionResult{{}, s[1].cast<double>()};
        o.correct = s[2].cast<bool>() && o.gt_present && o.detection.has_value();
        outcomes.push_back(o);
    }
    return outcomes;
}

}  // namespace

PYBIND11_MODULE(_segface, m) {
    m.doc() = "facial-segment face detection primitives";
    m.attr("__version__") = "1.0.0";

    py::list kinds;
    for (SegmentKind k : all_segment_kinds()) kinds.append(std::string(to_string(k)));
    m.attr("SEGMENT_KINDS") = kinds;

    m.def("canonical_rect", [](const std::string& kind) {
        const UnitRect& u = default_canonical_rects()[static_cast<int>(to_kind(kind))];
        return py::make_tuple(u.u1, u.v1, u.u2, u.v2);
    }, py::arg("kind"), "Ideal position of a segment within a unit face square.");

    m.def("downsample", [](const U8Array& arr, int factor) {
        return from_image(downsample(to_image(arr), factor));
    }, py::arg("image"), py::arg("factor"), "Block-mean downsampling by an integer factor.");

    m.def("clahe", [](const U8Array& arr, int tiles_x, int tiles_y, double clip_limit) {
        return from_image(clahe(to_image(arr), tiles_x, tiles_y, clip_limit));
    }, py::arg("image"), py::arg("tiles_x") = 8, py::arg("tiles_y") = 8, py::arg("clip_limit") = 2.0,
       "Contrast limited adaptive histogram equalization.");

    m.def("integral", [](const U8Array& arr) {
        const GrayImage img = to_image(arr);
        const IntegralImage ii(img);
        py::array_t<std::uint64_t> out({img.height + 1, img.width + 1});
        auto view = out.mutable_unchecked<2>();
        for (int y = 0; y <= img.height; ++y)
            for (int x = 0; x <= img.width; ++x) view(y, x) = ii.at(x, y);
        return out;
    }, py::arg("image"), "Summed-area table with a zero top row and left column.");

    m.def("lbp_code", [](const U8Array& arr, int x, int y, int cell_w, int cell_h) {
        return lbp_code(IntegralImage(to_image(arr)), LbpBlock{x, y, cell_w, cell_h});
    }, py::arg("image"), py::arg("x"), py::arg("y"), py::arg("cell_w"), py::arg("cell_h"),
       "Multi-block LBP code of the 3x3 cell grid anchored at (x, y).");

    m.def("iou", [](const py::sequence& a, const py::sequence& b) {
        return iou(to_box(a), to_box(b));
    }, py::arg("a"), py::arg("b"), "Intersection over union of two boxes.");

    m.def("enclosing_box", [](const std::vector<py::sequence>& boxes) {
        std::vector<BBox> bs;
        bs.reserve(boxes.size());
        for (const auto& s : boxes) bs.push_back(to_box(s));
        return from_box(enclosing_box(bs));
    }, py::arg("boxes"), "Smallest box containing all the given boxes.");

    m.def("estimate_full_face", [](const std::string& kind, const py::sequence& seg, double img_w,
                                   double img_h) {
        const FaceEstimate est = estimate_full_face(to_kind(kind), to_box(seg), img_w, img_h);
        py::dict d;
        d["face"] = from_box(est.face);
        d["unclamped"] = from_box(est.unclamped);
        d["center"] = py::make_tuple(est.center_x, est.center_y);
        d["half_diagonal"] = est.half_diagonal;
        return d;
    }, py::arg("kind"), py::arg("segment_box"), py::arg("img_w"), py::arg("img_h"),
       "Extrapolates a segment box to the full face it implies.");

    m.def("cluster_segments", [](const std::vector<std::pair<std::string, py::sequence>>& detections,
                                 double img_w, double img_h, int c, double r_factor) {
        std::vector<SegmentDetection> dets;
        std::vector<FaceEstimate> ests;
        for (const auto& [kind, box] : detections) {
            const SegmentKind k = to_kind(kind);
            dets.push_back({k, to_box(box), std::nullopt});
            ests.push_back(estimate_full_face(k, dets.back().box, img_w, img_h));
        }
        ClusterParams params{c, r_factor};
        py::list out;
        for (const Cluster& cl : cluster_segments(dets, ests, params)) {
            py::dict d;
            d["center"] = cl.center_idx;
            d["members"] = cl.member_idxs;
            d["radius"] = cl.radius;
            out.append(d);
        }
        return out;
    }, py::arg("detections"), py::arg("img_w"), py::arg("img_h"), py::arg("c") = 2,
       py::arg("r_factor") = 1.0 / 6.0,
       "Clusters (kind, box) detections by agreeing extrapolated face centers.");

    m.def("f1_score", [](std::int64_t tp, std::int64_t fp, std::int64_t fn) {
        return f1(ConfusionCounts{tp, fp, fn, 0});
    }, py::arg("tp"), py::arg("fp"), py::arg("fn"), "2TP / (2TP + FP + FN).");

    m.def("tpr_at_fpr", [](const py::iterable& outcomes, double fpr_target) -> py::object {
        const auto r = tpr_at_fpr(to_outcomes(outcomes), fpr_target);
        return r ? py::cast(*r) : py::none();
    }, py::arg("outcomes"), py::arg("fpr_target") = 0.01,
       "Max TPR at FPR <= target over (gt_present, score|None, correct) frames.");

    m.def("recall_at_precision", [](const py::iterable& outcomes, double precision_target) -> py::object {
        const auto r = recall_at_precision(to_outcomes(outcomes), precision_target);
        return r ? py::cast(*r) : py::none();
    }, py::arg("outcomes"), py::arg("precision_target") = 0.99,
       "Max recall at precision >= target, or None when unreachable.");
}
