#include "dnl/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "json.hpp"

#include "dnl/csv.hpp"
#include "dnl/errors.hpp"
#include "dnl/rng.hpp"

namespace dnl {

std::vector<Fingerprint> load_dataset(const std::filesystem::path& fingerprints_csv,
                                      const std::filesystem::path& observations_csv) {
    std::vector<Fingerprint> fps;
    std::unordered_map<std::int64_t, std::size_t> by_id;

    {
        csv::Reader reader(fingerprints_csv, {"fp_id", "floor", "x", "y"});
        std::vector<std::string> f;
        while (reader.next(f)) {
            Fingerprint fp;
            fp.fp_id = csv::parse_int(reader, f[0]);
            if (fp.fp_id < 0) reader.fail("fp_id must be non-negative");
            fp.floor = static_cast<int>(csv::parse_int(reader, f[1]));
            fp.position.x = csv::parse_double(reader, f[2]);
            fp.position.y = csv::parse_double(reader, f[3]);
            if (!std::isfinite(fp.position.x) || !std::isfinite(fp.position.y)) {
                reader.fail("non-finite position");
            }
            if (!by_id.emplace(fp.fp_id, fps.size()).second) {
                reader.fail("duplicate fp_id " + std::to_string(fp.fp_id));
            }
            fps.push_back(std::move(fp));
        }
    }

    {
        csv::Reader reader(observations_csv, {"fp_id", "mac", "rss_dbm"});
        std::vector<std::string> f;
        while (reader.next(f)) {
            const std::int64_t id = csv::parse_int(reader, f[0]);
            const std::string& mac = f[1];
            const double rss = csv::parse_double(reader, f[2]);
            if (mac.empty()) reader.fail("empty mac");
            if (!std::isfinite(rss)) reader.fail("non-finite rss");
            const auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw OrphanObservationError(reader.file_name() + ":" +
                                             std::to_string(reader.line_number()) +
                                             ": observation for unknown fp_id " +
                                             std::to_string(id));
            }
            if (!fps[it->second].observations.emplace(mac, rss).second) {
                throw DuplicateObservationError(
                    reader.file_name() + ":" + std::to_string(reader.line_number()) +
                    ": duplicate observation (fp_id=" + std::to_string(id) + ", mac=" + mac +
                    ")");
            }
        }
    }

    for (const Fingerprint& fp : fps) {
        if (fp.observations.empty()) {
            throw LoadError("fingerprint " + std::to_string(fp.fp_id) +
                            " observes no WAP (every fingerprint needs at least one observation)");
        }
    }
    return fps;
}

WapIndex build_wap_index(const std::vector<Fingerprint>& fps) {
    if (fps.empty()) throw ContractViolation("build_wap_index: empty fingerprint list");
    WapIndex index;
    for (const Fingerprint& fp : fps) {
        for (const auto& [mac, rss] : fp.observations) {
            index.mac_to_idx.emplace(mac, 0);
        }
    }
    std::size_t next = 1;  // std::map iterates MACs lexicographically
    for (auto& [mac, idx] : index.mac_to_idx) {
        idx = next++;
    }
    return index;
}

std::vector<double> rss_vector(const Fingerprint& fp, const WapIndex& index) {
    std::vector<double> v(index.size(), 0.0);
    for (const auto& [mac, rss] : fp.observations) {
        const std::size_t idx = index.lookup(mac);
        if (idx != 0) v[idx - 1] = rss;
    }
    return v;
}

DatasetSplit split_dataset(const std::vector<Fingerprint>& fps, std::uint64_t seed) {
    if (fps.size() < 5) {
        throw ContractViolation("split_dataset: need at least 5 fingerprints, got " +
                                std::to_string(fps.size()));
    }
    std::vector<std::int64_t> ids;
    ids.reserve(fps.size());
    for (const Fingerprint& fp : fps) ids.push_back(fp.fp_id);
    std::sort(ids.begin(), ids.end());

    RandomStream rng(seed);
    rng.shuffle(ids);

    const std::size_t n = ids.size();
    const std::size_t n_train = (n * 6) / 10;
    const std::size_t n_side = (n * 2) / 10;

    DatasetSplit split;
    split.seed = seed;
    split.train.assign(ids.begin(), ids.begin() + n_train);
    split.validation.assign(ids.begin() + n_train, ids.begin() + n_train + n_side);
    split.test.assign(ids.begin() + n_train + n_side, ids.begin() + n_train + 2 * n_side);
    // leftover tail joins train
    split.train.insert(split.train.end(), ids.begin() + n_train + 2 * n_side, ids.end());
    return split;
}

void save_split(const DatasetSplit& split, const std::filesystem::path& path) {
    nlohmann::json j;
    j["seed"] = split.seed;
    j["train"] = split.train;
    j["validation"] = split.validation;
    j["test"] = split.test;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

DatasetSplit load_split(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
    DatasetSplit split;
    try {
        split.seed = j.at("seed").get<std::uint64_t>();
        split.train = j.at("train").get<std::vector<std::int64_t>>();
        split.validation = j.at("validation").get<std::vector<std::int64_t>>();
        split.test = j.at("test").get<std::vector<std::int64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
    return split;
}

std::vector<Fingerprint> filter_by_ids(const std::vector<Fingerprint>& fps,
                                       const std::vector<std::int64_t>& ids) {
    std::unordered_map<std::int64_t, const Fingerprint*> by_id;
    by_id.reserve(fps.size());
    for (const Fingerprint& fp : fps) by_id.emplace(fp.fp_id, &fp);
    std::vector<Fingerprint> out;
    out.reserve(ids.size());
    for (std::int64_t id : ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw ContractViolation("filter_by_ids: fp_id " + std::to_string(id) +
                                    " not in dataset");
        }
        out.push_back(*it->second);
    }
    return out;
}

}  // namespace dnl
