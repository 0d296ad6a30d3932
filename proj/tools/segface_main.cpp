#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "segface/pgm.hpp"
#include "segface/runner.hpp"

namespace {

using namespace segface;
using nlohmann::json;

struct CommonArgs {
    std::string config_file;
    std::vector<std::string> overrides;  // key=value
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_file, "flat key = value config file");
    cmd->add_option("--seed", args.seed, "override the seed");
    cmd->add_option("--jobs", args.jobs, "worker threads for detect/eval");
    cmd->add_option("overrides", args.overrides, "key=value config overrides");
}

KeyValues overrides_to_map(const CommonArgs& args) {
    KeyValues kv;
    for (const std::string& ov : args.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::runtime_error("override must be key=value: '" + ov + "'");
        kv[ov.substr(0, eq)] = ov.substr(eq + 1);
    }
    if (args.seed) kv["seed"] = std::to_string(*args.seed);
    if (args.jobs) kv["jobs"] = std::to_string(*args.jobs);
    return kv;
}

// defaults < base (model train_config, when present) < config file < flags.
PipelineConfig resolve_config(const CommonArgs& args, const KeyValues* base = nullptr) {
    KeyValues kv;
    if (base) kv = *base;
    if (!args.config_file.empty())
        for (const auto& [k, v] : read_config_file(args.config_file)) kv[k] = v;
    for (const auto& [k, v] : overrides_to_map(args)) kv[k] = v;
    return config_from_map(kv);
}

json config_json(const PipelineConfig& cfg) {
    json j = json::object();
    for (const auto& [k, v] : config_to_map(cfg)) j[k] = v;
    return j;
}

std::optional<Split> parse_split(const std::string& s) {
    if (s == "all") return std::nullopt;
    if (s == "train") return Split::Train;
    if (s == "test") return Split::Test;
    throw std::runtime_error("split must be train, test or all");
}

std::filesystem::path image_root_for(const std::string& images, const std::string& annotations) {
    if (!images.empty()) return images;
    return std::filesystem::path(annotations).parent_path();
}

ModelFile load_model_checked(const std::string& model_path, const CommonArgs& args,
                             PipelineConfig& cfg_out) {
    ModelFile mf = load_model(model_path);
    const KeyValues base = config_to_map(mf.config);
    cfg_out = resolve_config(args, &base);
    if (cfg_out.detection.active_kinds != mf.config.detection.active_kinds)
        throw std::runtime_error("model/config mismatch: active kinds differ from the model file");
    return mf;
}

int cmd_synth(const CommonArgs& args, const std::string& out_dir) {
    const PipelineConfig cfg = resolve_config(args);
    const KeyValues resolved = config_to_map(cfg);
    const auto frames = synth_dataset(cfg.synth, out_dir, &resolved);
    std::int64_t faces = 0;
    for (const auto& f : frames) faces += f.gt_face.has_value();
    std::cout << "synth: wrote " << frames.size() << " frames (" << faces << " with faces) to "
              << out_dir << "\n";
    return 0;
}

int cmd_train(const CommonArgs& args, const std::string& annotations, const std::string& images,
              const std::string& model_out) {
    PipelineConfig cfg = resolve_config(args);
    const auto frames = load_annotations(annotations, cfg.effective_split_seed());
    const ModelFile mf = train_pipeline(cfg, frames, image_root_for(images, annotations));
    save_model(mf, model_out);
    std::cout << "train: " << mf.tables.n_pos << " positive / " << mf.tables.n_neg
              << " negative proposals; model written to " << model_out << "\n";
    return 0;
}

int cmd_detect(const CommonArgs& args, const std::string& annotations, const std::string& images,
               const std::string& model_path, const std::string& split) {
    PipelineConfig cfg;
    const ModelFile mf = load_model_checked(model_path, args, cfg);
    const auto frames = load_annotations(annotations, cfg.effective_split_seed());
    const auto run = run_frames(cfg, mf.tables, mf.model, frames, image_root_for(images, annotations),
                                parse_split(split), /*sweep_scores=*/false);

    // stdout carries only the per-frame lines; the resolved config goes to
    // stderr so runs stay reproducible and auditable.
    for (const auto& [k, v] : config_to_map(cfg)) std::cerr << "# " << k << " = " << v << "\n";

    std::size_t i = 0;
    for (const AnnotatedFrame& f : frames) {
        if (parse_split(split) && f.split != *parse_split(split)) continue;
        const FrameOutcome& o = run.outcomes[i++];
        if (o.detection) {
            const BBox& b = o.detection->box;
            std::printf("%s %.3f %.3f %.3f %.3f %.6f\n", f.image.c_str(), b.x1, b.y1, b.x2, b.y2,
                        o.detection->score);
        } else {
            std::printf("%s NONE\n", f.image.c_str());
        }
    }
    return 0;
}

void write_curves_csv(const std::vector<CurvePoint>& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("eval: cannot write " + path);
    out << "theta,tp,fp,fn,tn,precision,recall,tpr,fpr\n";
    char buf[256];
    for (const CurvePoint& p : curve) {
        std::snprintf(buf, sizeof(buf), "%.17g,%lld,%lld,%lld,%lld,%.17g,%.17g,%.17g,%.17g\n", p.theta,
                      static_cast<long long>(p.counts.tp), static_cast<long long>(p.counts.fp),
                      static_cast<long long>(p.counts.fn), static_cast<long long>(p.counts.tn),
                      p.precision, p.recall, p.tpr, p.fpr);
        out << buf;
    }
}

int cmd_eval(const CommonArgs& args, const std::string& annotations, const std::string& images,
             const std::string& model_path, const std::string& report_path, std::string curves_path,
             const std::string& split) {
    PipelineConfig cfg;
    const ModelFile mf = load_model_checked(model_path, args, cfg);
    const auto frames = load_annotations(annotations, cfg.effective_split_seed());
    const auto run = run_frames(cfg, mf.tables, mf.model, frames, image_root_for(images, annotations),
                                parse_split(split), /*sweep_scores=*/true);

    const auto at_theta = apply_theta(run.outcomes, cfg.detection.theta);
    const ConfusionCounts counts = confusion(at_theta);
    const auto curve = sweep_curve(run.outcomes);
    const auto tpr = tpr_at_fpr(run.outcomes, 0.01);
    const auto rec = recall_at_precision(run.outcomes, 0.99);

    if (curves_path.empty()) curves_path = report_path + ".curves.csv";
    write_curves_csv(curve, curves_path);

    std::int64_t face_frames = 0, noface_frames = 0;
    for (const FrameOutcome& o : run.outcomes) (o.gt_present ? face_frames : noface_frames) += 1;

    json report;
    report["config"] = config_json(cfg);
    report["split"] = split;
    report["frames"] = run.outcomes.size();
    report["face_frames"] = face_frames;
    report["noface_frames"] = noface_frames;
    report["at_theta"] = {{"theta", cfg.detection.theta}, {"tp", counts.tp},       {"fp", counts.fp},
                          {"fn", counts.fn},              {"tn", counts.tn},       {"precision", precision(counts)},
                          {"recall", recall(counts)},     {"f1", f1(counts)}};
    report["tpr_at_1pct_fpr"] = tpr ? json(*tpr) : json(nullptr);
    report["recall_at_99pct_precision"] = rec ? json(*rec) : json(nullptr);
    report["curves_csv"] = curves_path;

    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("eval: cannot write " + report_path);
    out << report.dump(2) << "\n";

    std::cout << "eval: F1 " << f1(counts) << " on " << run.outcomes.size() << " " << split
              << " frames; report written to " << report_path << "\n";
    return 0;
}

int cmd_bench(const CommonArgs& args, const std::string& annotations, const std::string& images,
              const std::string& model_path, const std::string& out_path, int max_frames,
              const std::string& split) {
    PipelineConfig cfg;
    const ModelFile mf = load_model_checked(model_path, args, cfg);
    auto frames = load_annotations(annotations, cfg.effective_split_seed());
    const auto want = parse_split(split);
    std::vector<AnnotatedFrame> selected;
    for (const AnnotatedFrame& f : frames)
        if (!want || f.split == *want) selected.push_back(f);
    if (max_frames > 0 && static_cast<int>(selected.size()) > max_frames)
        selected.resize(max_frames);
    if (selected.empty()) throw std::runtime_error("bench: no frames selected");

    // Timing covers detect_face only; frames are preloaded.
    const auto root = image_root_for(images, annotations);
    std::vector<GrayImage> imgs;
    imgs.reserve(selected.size());
    for (const AnnotatedFrame& f : selected) imgs.push_back(read_pgm(resolve_image_path(root, f.image)));

    const auto backend = make_backend(cfg, frames);
    std::vector<double> ms(selected.size());
    std::int64_t detections = 0;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto det = detect_face(imgs[i], *backend, mf.tables, mf.model, cfg.detection,
                                     selected[i].frame_id);
        const auto t1 = std::chrono::steady_clock::now();
        ms[i] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        detections += det.has_value();
    }
    const TimingStats stats = timing_stats(ms);

    json j;
    j["config"] = config_json(cfg);
    j["split"] = split;
    j["frames"] = stats.frames;
    j["detections"] = detections;
    j["mean_ms"] = stats.mean_ms;
    j["median_ms"] = stats.median_ms;
    j["p95_ms"] = stats.p95_ms;
    j["min_ms"] = stats.min_ms;
    j["max_ms"] = stats.max_ms;
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("bench: cannot write " + out_path);
    out << j.dump(2) << "\n";

    std::cout << "bench: mean " << stats.mean_ms << " ms, median " << stats.median_ms << " ms, p95 "
              << stats.p95_ms << " ms over " << stats.frames << " frames\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"facial-segment face detector"};
    app.require_subcommand(1);

    CommonArgs synth_args, train_args, detect_args, eval_args, bench_args;
    std::string synth_out;
    std::string train_ann, train_images, train_model;
    std::string detect_ann, detect_images, detect_model, detect_split = "all";
    std::string eval_ann, eval_images, eval_model, eval_report, eval_curves, eval_split = "test";
    std::string bench_ann, bench_images, bench_model, bench_out, bench_split = "all";
    int bench_frames = 0;

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--out", synth_out, "output directory")->required();
    add_common(synth, synth_args);

    CLI::App* train = app.add_subcommand("train", "train a model from annotated frames");
    train->add_option("--annotations", train_ann, "JSON-lines annotation file")->required();
    train->add_option("--images", train_images, "image root (default: annotation directory)");
    train->add_option("--model", train_model, "output model file")->required();
    add_common(train, train_args);

    CLI::App* detect = app.add_subcommand("detect", "print per-frame detections");
    detect->add_option("--annotations", detect_ann, "JSON-lines annotation file")->required();
    detect->add_option("--images", detect_images, "image root");
    detect->add_option("--model", detect_model, "model file")->required();
    detect->add_option("--split", detect_split, "train|test|all (default all)");
    add_common(detect, detect_args);

    CLI::App* eval = app.add_subcommand("eval", "evaluate and write a metrics report");
    eval->add_option("--annotations", eval_ann, "JSON-lines annotation file")->required();
    eval->add_option("--images", eval_images, "image root");
    eval->add_option("--model", eval_model, "model file")->required();
    eval->add_option("--report", eval_report, "output report JSON")->required();
    eval->add_option("--curves", eval_curves, "output curve CSV (default: <report>.curves.csv)");
    eval->add_option("--split", eval_split, "train|test|all (default test)");
    add_common(eval, eval_args);

    CLI::App* bench = app.add_subcommand("bench", "measure per-frame detection time");
    bench->add_option("--annotations", bench_ann, "JSON-lines annotation file")->required();
    bench->add_option("--images", bench_images, "image root");
    bench->add_option("--model", bench_model, "model file")->required();
    bench->add_option("--out", bench_out, "output timing JSON")->required();
    bench->add_option("--frames", bench_frames, "cap the number of frames");
    bench->add_option("--split", bench_split, "train|test|all (default all)");
    add_common(bench, bench_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(synth_args, synth_out);
        if (train->parsed()) return cmd_train(train_args, train_ann, train_images, train_model);
        if (detect->parsed())
            return cmd_detect(detect_args, detect_ann, detect_images, detect_model, detect_split);
        if (eval->parsed())
            return cmd_eval(eval_args, eval_ann, eval_images, eval_model, eval_report, eval_curves,
                            eval_split);
        if (bench->parsed())
            return cmd_bench(bench_args, bench_ann, bench_images, bench_model, bench_out, bench_frames,
                             bench_split);
    } catch (const std::exception& e) {
        std::cerr << "segface: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
