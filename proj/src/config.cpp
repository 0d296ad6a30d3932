#include "segface/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace segface {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument("config: bad value for " + key + ": '" + value + "'");
}

double parse_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) bad_value(key, v);
        return d;
    } catch (const std::invalid_argument&) {
        bad_value(key, v);
    } catch (const std::out_of_range&) {
        bad_value(key, v);
    }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const std::int64_t i = std::stoll(v, &pos);
        if (pos != v.size()) bad_value(key, v);
        return i;
    } catch (const std::invalid_argument&) {
        bad_value(key, v);
    } catch (const std::out_of_range&) {
        bad_value(key, v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const std::uint64_t i = std::stoull(v, &pos);
        if (pos != v.size()) bad_value(key, v);
        return i;
    } catch (const std::invalid_argument&) {
        bad_value(key, v);
    } catch (const std::out_of_range&) {
        bad_value(key, v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, v);
}

std::vector<SegmentKind> parse_kinds(const std::string& v) {
    if (v == "C0" || v == "c0") return kinds_c0();
    if (v == "Cbest" || v == "cbest" || v == "CBEST") return kinds_cbest();
    std::vector<SegmentKind> kinds;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        const auto k = segment_kind_from_string(tok);
        if (!k) throw std::invalid_argument("config: unknown segment kind '" + tok + "'");
        kinds.push_back(*k);
    }
    if (kinds.empty()) throw std::invalid_argument("config: kinds list is empty");
    return normalize_kinds(std::move(kinds));
}

std::string fmt_double(double d) {
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

std::string kinds_string(const std::vector<SegmentKind>& kinds) {
    if (kinds == kinds_c0()) return "C0";
    if (kinds == kinds_cbest()) return "Cbest";
    std::string s;
    for (SegmentKind k : kinds) {
        if (!s.empty()) s += ',';
        s += to_string(k);
    }
    return s;
}

}  // namespace

KeyValues read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: " + path.string() + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty())
            throw std::runtime_error("config: " + path.string() + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

PipelineConfig config_from_map(const KeyValues& kv) {
    PipelineConfig cfg;
    cfg.detection.active_kinds = kinds_c0();

    bool fixture_seed_set = false;
    for (const auto& [key, value] : kv) {
        if (key == "kinds") cfg.detection.active_kinds = parse_kinds(value);
        else if (key == "zeta") cfg.detection.zeta = static_cast<int>(parse_int(key, value));
        else if (key == "c") cfg.detection.cluster.min_cluster_size = static_cast<int>(parse_int(key, value));
        else if (key == "r_factor") cfg.detection.cluster.radius_factor = parse_double(key, value);
        else if (key == "delta") cfg.detection.delta = parse_double(key, value);
        else if (key == "theta") cfg.detection.theta = parse_double(key, value);
        else if (key == "downsample") cfg.detection.downsample_factor = static_cast<int>(parse_int(key, value));
        else if (key == "min_face") cfg.detection.min_face_size = static_cast<int>(parse_int(key, value));
        else if (key == "clahe") cfg.detection.clahe_enabled = parse_bool(key, value);
        else if (key == "clahe_tiles_x") cfg.detection.clahe_tiles_x = static_cast<int>(parse_int(key, value));
        else if (key == "clahe_tiles_y") cfg.detection.clahe_tiles_y = static_cast<int>(parse_int(key, value));
        else if (key == "clahe_clip") cfg.detection.clahe_clip = parse_double(key, value);
        else if (key == "clahe_before_downsample") cfg.detection.clahe_before_downsample = parse_bool(key, value);
        else if (key == "laplace_alpha") cfg.detection.laplace_alpha = parse_double(key, value);
        else if (key == "seed") cfg.detection.seed = parse_u64(key, value);
        else if (key == "split_seed") cfg.split_seed = parse_u64(key, value);
        else if (key == "backend") {
            if (value != "fixture" && value != "cascade") bad_value(key, value);
            cfg.backend = value;
        }
        else if (key == "fixture_miss_rate") cfg.fixture.miss_rate = parse_double(key, value);
        else if (key == "fixture_fp_rate") cfg.fixture.false_positive_rate = parse_double(key, value);
        else if (key == "fixture_jitter_sd") cfg.fixture.center_jitter_sd = parse_double(key, value);
        else if (key == "fixture_seed") {
            cfg.fixture.seed = parse_u64(key, value);
            fixture_seed_set = true;
        }
        else if (key == "cascade_dir") cfg.cascade_dir = value;
        else if (key == "cascade_scale_factor") cfg.scan.scale_factor = parse_double(key, value);
        else if (key == "cascade_min_size") cfg.scan.min_size = static_cast<int>(parse_int(key, value));
        else if (key == "cascade_step") cfg.scan.step = static_cast<int>(parse_int(key, value));
        else if (key == "merge_iou") cfg.merge_iou = parse_double(key, value);
        else if (key == "svm_lambda") cfg.svm_lambda = parse_double(key, value);
        else if (key == "svm_epochs") cfg.svm_epochs = static_cast<int>(parse_int(key, value));
        else if (key == "jobs") cfg.jobs = static_cast<int>(parse_int(key, value));
        else if (key == "synth_frames") cfg.synth.frame_count = static_cast<int>(parse_int(key, value));
        else if (key == "synth_noface_fraction") cfg.synth.no_face_fraction = parse_double(key, value);
        else if (key == "synth_width") cfg.synth.width = static_cast<int>(parse_int(key, value));
        else if (key == "synth_height") cfg.synth.height = static_cast<int>(parse_int(key, value));
        else if (key == "synth_cropped_fraction") cfg.synth.cropped_fraction = parse_double(key, value);
        else if (key == "synth_min_crop") cfg.synth.min_crop = parse_double(key, value);
        else if (key == "synth_max_crop") cfg.synth.max_crop = parse_double(key, value);
        else if (key == "synth_clutter") cfg.synth.clutter_density = parse_double(key, value);
        else if (key == "synth_min_face_scale") cfg.synth.min_face_scale = parse_double(key, value);
        else if (key == "synth_max_face_scale") cfg.synth.max_face_scale = parse_double(key, value);
        else if (key.rfind("canon_", 0) == 0) {
            const auto kind = segment_kind_from_string(key.substr(6));
            if (!kind) throw std::invalid_argument("config: unknown segment kind in key '" + key + "'");
            std::stringstream ss(value);
            std::string tok;
            double u[4];
            for (int i = 0; i < 4; ++i) {
                if (!std::getline(ss, tok, ',')) bad_value(key, value);
                u[i] = parse_double(key, trim(tok));
            }
            if (std::getline(ss, tok, ',')) bad_value(key, value);
            if (!(u[0] >= 0 && u[0] < u[2] && u[2] <= 1 && u[1] >= 0 && u[1] < u[3] && u[3] <= 1))
                bad_value(key, value);
            cfg.detection.canonical[static_cast<int>(*kind)] = {u[0], u[1], u[2], u[3]};
        }
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (!fixture_seed_set) cfg.fixture.seed = cfg.detection.seed;
    cfg.synth.seed = cfg.detection.seed;

    if (cfg.detection.zeta < 1) throw std::invalid_argument("config: zeta must be >= 1");
    if (cfg.detection.cluster.min_cluster_size < 1) throw std::invalid_argument("config: c must be >= 1");
    if (!(cfg.detection.cluster.radius_factor > 0)) throw std::invalid_argument("config: r_factor must be > 0");
    if (!(cfg.detection.delta > 0 && cfg.detection.delta < 1))
        throw std::invalid_argument("config: delta must be in (0,1)");
    if (cfg.detection.downsample_factor < 1) throw std::invalid_argument("config: downsample must be >= 1");
    if (cfg.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
    return cfg;
}

KeyValues config_to_map(const PipelineConfig& cfg) {
    KeyValues kv;
    kv["kinds"] = kinds_string(cfg.detection.active_kinds);
    kv["zeta"] = std::to_string(cfg.detection.zeta);
    kv["c"] = std::to_string(cfg.detection.cluster.min_cluster_size);
    kv["r_factor"] = fmt_double(cfg.detection.cluster.radius_factor);
    kv["delta"] = fmt_double(cfg.detection.delta);
    kv["theta"] = fmt_double(cfg.detection.theta);
    kv["downsample"] = std::to_string(cfg.detection.downsample_factor);
    kv["min_face"] = std::to_string(cfg.detection.min_face_size);
    kv["clahe"] = cfg.detection.clahe_enabled ? "true" : "false";
    kv["clahe_tiles_x"] = std::to_string(cfg.detection.clahe_tiles_x);
    kv["clahe_tiles_y"] = std::to_string(cfg.detection.clahe_tiles_y);
    kv["clahe_clip"] = fmt_double(cfg.detection.clahe_clip);
    kv["clahe_before_downsample"] = cfg.detection.clahe_before_downsample ? "true" : "false";
    kv["laplace_alpha"] = fmt_double(cfg.detection.laplace_alpha);
    kv["seed"] = std::to_string(cfg.detection.seed);
    kv["split_seed"] = std::to_string(cfg.split_seed);
    kv["backend"] = cfg.backend;
    kv["fixture_miss_rate"] = fmt_double(cfg.fixture.miss_rate);
    kv["fixture_fp_rate"] = fmt_double(cfg.fixture.false_positive_rate);
    kv["fixture_jitter_sd"] = fmt_double(cfg.fixture.center_jitter_sd);
    kv["fixture_seed"] = std::to_string(cfg.fixture.seed);
    kv["cascade_dir"] = cfg.cascade_dir;
    kv["cascade_scale_factor"] = fmt_double(cfg.scan.scale_factor);
    kv["cascade_min_size"] = std::to_string(cfg.scan.min_size);
    kv["cascade_step"] = std::to_string(cfg.scan.step);
    kv["merge_iou"] = fmt_double(cfg.merge_iou);
    kv["svm_lambda"] = fmt_double(cfg.svm_lambda);
    kv["svm_epochs"] = std::to_string(cfg.svm_epochs);
    kv["jobs"] = std::to_string(cfg.jobs);
    kv["synth_frames"] = std::to_string(cfg.synth.frame_count);
    kv["synth_noface_fraction"] = fmt_double(cfg.synth.no_face_fraction);
    kv["synth_width"] = std::to_string(cfg.synth.width);
    kv["synth_height"] = std::to_string(cfg.synth.height);
    kv["synth_cropped_fraction"] = fmt_double(cfg.synth.cropped_fraction);
    kv["synth_min_crop"] = fmt_double(cfg.synth.min_crop);
    kv["synth_max_crop"] = fmt_double(cfg.synth.max_crop);
    kv["synth_clutter"] = fmt_double(cfg.synth.clutter_density);
    kv["synth_min_face_scale"] = fmt_double(cfg.synth.min_face_scale);
    kv["synth_max_face_scale"] = fmt_double(cfg.synth.max_face_scale);
    const CanonicalRects& defaults = default_canonical_rects();
    for (int i = 0; i < kSegmentKindCount; ++i) {
        const UnitRect& u = cfg.detection.canonical[i];
        const UnitRect& d = defaults[i];
        if (u.u1 != d.u1 || u.v1 != d.v1 || u.u2 != d.u2 || u.v2 != d.v2)
            kv["canon_" + std::string(to_string(static_cast<SegmentKind>(i)))] =
                fmt_double(u.u1) + "," + fmt_double(u.v1) + "," + fmt_double(u.u2) + "," + fmt_double(u.v2);
    }
    return kv;
}

}  // namespace segface
