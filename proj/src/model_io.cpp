#include "segface/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace segface {

namespace {
using nlohmann::json;

json kind_names(std::uint32_t mask) {
    json names = json::array();
    for (SegmentKind k : kinds_in_mask(mask)) names.push_back(to_string(k));
    return names;
}
}  // namespace

void save_model(const ModelFile& mf, const std::filesystem::path& path) {
    json j;
    j["format_version"] = kModelFormatVersion;
    json kinds = json::array();
    for (SegmentKind k : mf.config.detection.active_kinds) kinds.push_back(to_string(k));
    j["active_kinds"] = std::move(kinds);
    j["weights"] = mf.model.weights;
    j["bias"] = mf.model.bias;

    json sets = json::array();
    for (const auto& [mask, probs] : mf.tables.set_probs)
        sets.push_back({{"kinds", kind_names(mask)}, {"pt", probs.first}, {"pf", probs.second}});
    json kinds_probs = json::array();
    for (int i = 0; i < kSegmentKindCount; ++i)
        kinds_probs.push_back({{"kind", to_string(static_cast<SegmentKind>(i))},
                               {"pt", mf.tables.kind_probs[i].first},
                               {"pf", mf.tables.kind_probs[i].second}});
    j["tables"] = {{"n_pos", mf.tables.n_pos},
                   {"n_neg", mf.tables.n_neg},
                   {"set_probs", std::move(sets)},
                   {"kind_probs", std::move(kinds_probs)},
                   {"unseen_pt", mf.tables.unseen_pt},
                   {"unseen_pf", mf.tables.unseen_pf}};

    json train_config = json::object();
    for (const auto& [k, v] : config_to_map(mf.config)) train_config[k] = v;
    j["train_config"] = std::move(train_config);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("save_model: write failed for " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("load_model: corrupted model file " + path.string() + ": " + e.what());
    }

    ModelFile mf;
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw std::runtime_error("unsupported format_version " + std::to_string(version));

        KeyValues kv;
        for (const auto& [k, v] : j.at("train_config").items()) kv[k] = v.get<std::string>();
        mf.config = config_from_map(kv);

        std::vector<SegmentKind> kinds;
        for (const json& name : j.at("active_kinds")) {
            const auto k = segment_kind_from_string(name.get<std::string>());
            if (!k) throw std::runtime_error("unknown segment kind '" + name.get<std::string>() + "'");
            kinds.push_back(*k);
        }
        if (kinds != mf.config.detection.active_kinds)
            throw std::runtime_error("active_kinds disagree with train_config");

        mf.model.weights = j.at("weights").get<std::vector<double>>();
        mf.model.bias = j.at("bias").get<double>();
        const std::size_t expected = 2 * kinds.size() + 2;
        if (mf.model.weights.size() != expected)
            throw std::runtime_error("weight length " + std::to_string(mf.model.weights.size()) +
                                     " does not match 2n+2 = " + std::to_string(expected));

        const json& tables = j.at("tables");
        mf.tables.n_pos = tables.at("n_pos").get<std::int64_t>();
        mf.tables.n_neg = tables.at("n_neg").get<std::int64_t>();
        mf.tables.unseen_pt = tables.value("unseen_pt", 0.0);
        mf.tables.unseen_pf = tables.value("unseen_pf", 0.0);
        for (const json& entry : tables.at("set_probs")) {
            std::uint32_t mask = 0;
            for (const json& name : entry.at("kinds")) {
                const auto k = segment_kind_from_string(name.get<std::string>());
                if (!k) throw std::runtime_error("unknown segment kind in set_probs");
                mask |= kind_bit(*k);
            }
            mf.tables.set_probs[mask] = {entry.at("pt").get<double>(), entry.at("pf").get<double>()};
        }
        for (const json& entry : tables.at("kind_probs")) {
            const auto k = segment_kind_from_string(entry.at("kind").get<std::string>());
            if (!k) throw std::runtime_error("unknown segment kind in kind_probs");
            mf.tables.kind_probs[static_cast<int>(*k)] = {entry.at("pt").get<double>(),
                                                          entry.at("pf").get<double>()};
        }
    } catch (const json::exception& e) {
        throw std::runtime_error("load_model: corrupted model file " + path.string() + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error("load_model: " + path.string() + ": " + e.what());
    }
    return mf;
}

}  // namespace segface
