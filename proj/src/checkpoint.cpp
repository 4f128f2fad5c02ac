#include "dnl/checkpoint.hpp"

#include <fstream>

#include "json.hpp"

#include "dnl/errors.hpp"

namespace dnl {

namespace {
constexpr int kSchemaVersion = 1;
}

void save_checkpoint(const DnlModel& model, const std::filesystem::path& path) {
    nlohmann::json j;
    j["schema"] = kSchemaVersion;

    nlohmann::json config;
    config["k"] = model.config.k;
    config["latent_dim"] = model.config.latent_dim;
    config["head_hidden"] = model.config.head_hidden;
    config["gin_eps"] = model.config.gin_eps;
    config["seed"] = model.config.seed;
    config["fp_extractor_dims"] = {3, model.config.latent_dim, model.config.latent_dim,
                                   model.config.latent_dim};
    config["gin_mlp_dims"] = {model.config.latent_dim, model.config.latent_dim,
                              model.config.latent_dim};
    config["head_dims"] = {model.config.latent_dim, model.config.head_hidden, 2};
    j["config"] = config;

    j["norm"] = {{"origin", {model.norm.origin_x, model.norm.origin_y}},
                 {"scale", model.norm.scale},
                 {"rss_floor", model.norm.rss_floor},
                 {"rss_ceil", model.norm.rss_ceil}};

    // MACs in index order (1..size); the vector position encodes the index.
    std::vector<std::string> macs(model.wap_index.size());
    for (const auto& [mac, idx] : model.wap_index.mac_to_idx) macs[idx - 1] = mac;
    j["wap_index"] = {{"macs", macs}};

    nlohmann::json tensors;
    for (const auto& [name, t] : model.named_tensors()) {
        if (!all_finite(*t)) {
            throw CheckpointError("save_checkpoint: non-finite values in tensor " + name);
        }
        tensors[name] = {{"shape", {t->rows, t->cols}}, {"data", t->data}};
    }
    j["tensors"] = tensors;

    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump() << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

DnlModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(path.string() + ": " + e.what());
    }

    try {
        if (j.at("schema").get<int>() != kSchemaVersion) {
            throw CheckpointError(path.string() + ": unsupported schema version " +
                                  j.at("schema").dump());
        }

        ModelConfig config;
        const auto& jc = j.at("config");
        config.k = jc.at("k").get<std::size_t>();
        config.latent_dim = jc.at("latent_dim").get<std::size_t>();
        config.head_hidden = jc.at("head_hidden").get<std::size_t>();
        config.gin_eps = jc.at("gin_eps").get<double>();
        config.seed = jc.at("seed").get<std::uint64_t>();
        if (config.k == 0 || config.latent_dim == 0 || config.head_hidden == 0) {
            throw CheckpointError(path.string() + ": invalid config block");
        }

        NormalizationParams norm;
        const auto& jn = j.at("norm");
        norm.origin_x = jn.at("origin").at(0).get<double>();
        norm.origin_y = jn.at("origin").at(1).get<double>();
        norm.scale = jn.at("scale").get<double>();
        norm.rss_floor = jn.at("rss_floor").get<double>();
        norm.rss_ceil = jn.at("rss_ceil").get<double>();
        if (norm.scale <= 0.0 || norm.rss_ceil <= norm.rss_floor) {
            throw CheckpointError(path.string() + ": invalid normalization block");
        }

        WapIndex index;
        const auto macs = j.at("wap_index").at("macs").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < macs.size(); ++i) {
            if (!index.mac_to_idx.emplace(macs[i], i + 1).second) {
                throw CheckpointError(path.string() + ": duplicate mac in wap_index");
            }
        }

        // Allocate the expected shapes, then require the file to match exactly.
        RandomStream scratch(0);
        DnlModel model = init_model(config, norm, std::move(index), scratch);
        const auto& tensors = j.at("tensors");
        for (auto& [name, t] : model.named_tensors()) {
            const auto& entry = tensors.at(name);
            const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
            if (shape.size() != 2 || shape[0] != t->rows || shape[1] != t->cols) {
                throw CheckpointError(path.string() + ": tensor " + name +
                                      " has shape disagreement (expected [" +
                                      std::to_string(t->rows) + "," + std::to_string(t->cols) +
                                      "], got " + entry.at("shape").dump() + ")");
            }
            auto data = entry.at("data").get<std::vector<double>>();
            if (data.size() != t->rows * t->cols) {
                throw CheckpointError(path.string() + ": tensor " + name +
                                      " data length does not match its shape");
            }
            t->data = std::move(data);
            if (!all_finite(*t)) {
                throw CheckpointError(path.string() + ": tensor " + name +
                                      " holds non-finite values");
            }
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(path.string() + ": " + e.what());
    }
}

}  // namespace dnl
