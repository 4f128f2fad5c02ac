#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dnl/fingerprint.hpp"

namespace dnl {

/// Log-distance path-loss radio map: RSS = p0 - 10·η·log10(max(d, 1 m)) plus
/// gaussian shadowing, cut off at the detection threshold.
struct RadioMapConfig {
    double width = 100.0;    // meters
    double height = 80.0;
    std::size_t n_waps = 60;
    std::size_t n_fps = 2000;
    double tx_power_dbm = -30.0;        // received power at d0 = 1 m
    double path_loss_exponent = 3.0;
    double shadowing_sigma = 4.0;       // dB
    double detection_threshold = -95.0; // dBm; weaker observations are dropped
    bool grid_placement = false;        // FPs on a regular lattice instead of uniform
    int floor = 0;
    std::uint64_t seed = 0;
};

struct WapPlacement {
    std::string mac;
    Position position;
};

struct RadioMap {
    std::vector<Fingerprint> fingerprints;
    std::vector<WapPlacement> waps;  // ground truth, diagnostics only
};

RadioMap generate(const RadioMapConfig& cfg);

/// Replaces the position labels of a seeded random ceil(fraction·n) subset
/// with uniform draws over the data bounding box; observations are untouched.
struct OutlierInjection {
    std::vector<Fingerprint> fingerprints;
    std::vector<std::int64_t> corrupted_ids;  // ascending
};
OutlierInjection inject_outliers(const std::vector<Fingerprint>& fps, double fraction,
                                 std::uint64_t seed);

/// Writes fingerprints.csv, observations.csv, and waps_truth.csv into `dir`.
void write_dataset(const RadioMap& map, const std::filesystem::path& dir);

}  // namespace dnl
