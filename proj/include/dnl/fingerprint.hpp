#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace dnl {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

/// One labeled RSS scan: position plus the MAC -> RSS map observed there.
/// observations is ordered by MAC so that every downstream walk is
/// deterministic.
struct Fingerprint {
    std::int64_t fp_id = 0;
    int floor = 0;
    Position position;
    std::map<std::string, double> observations;  // MAC -> RSS [dBm]
};

/// Global MAC address index over a training corpus.
/// Known MACs get 1..size in lexicographic order; index 0 is reserved for
/// MACs first seen at inference time (the shared unknown bucket).
struct WapIndex {
    std::map<std::string, std::size_t> mac_to_idx;

    std::size_t size() const { return mac_to_idx.size(); }

    /// Index of `mac`, or 0 when the MAC is not part of the corpus.
    std::size_t lookup(const std::string& mac) const {
        const auto it = mac_to_idx.find(mac);
        return it == mac_to_idx.end() ? 0 : it->second;
    }
};

struct DatasetSplit {
    std::uint64_t seed = 0;
    std::vector<std::int64_t> train;
    std::vector<std::int64_t> validation;
    std::vector<std::int64_t> test;
};

/// Loads the two-file long-format dataset and joins observations onto
/// fingerprints by fp_id. Every fingerprint must observe at least one WAP.
std::vector<Fingerprint> load_dataset(const std::filesystem::path& fingerprints_csv,
                                      const std::filesystem::path& observations_csv);

WapIndex build_wap_index(const std::vector<Fingerprint>& fps);

/// Dense signal-space vector of length index.size(): slot j-1 carries the RSS
/// of the MAC with index j, 0 where the WAP was not detected. MACs outside
/// the index are dropped (the vector never grows at inference time).
std::vector<double> rss_vector(const Fingerprint& fp, const WapIndex& index);

/// Seeded 6:2:2 partition. Ids are sorted, shuffled with SplitMix64(seed),
/// then cut: the first floor(0.6n) ids go to train, the next floor(0.2n) to
/// validation, the next floor(0.2n) to test, and any leftover tail joins
/// train.
DatasetSplit split_dataset(const std::vector<Fingerprint>& fps, std::uint64_t seed);

void save_split(const DatasetSplit& split, const std::filesystem::path& path);
DatasetSplit load_split(const std::filesystem::path& path);

/// Subset of `fps` matching `ids`, in `ids` order. Unknown ids are an error.
std::vector<Fingerprint> filter_by_ids(const std::vector<Fingerprint>& fps,
                                       const std::vector<std::int64_t>& ids);

}  // namespace dnl
