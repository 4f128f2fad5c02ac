#include "dnl/synth_radio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dnl/csv.hpp"
#include "dnl/errors.hpp"
#include "dnl/rng.hpp"

namespace dnl {

namespace {

std::string mac_for(std::size_t i) {
    // Locally administered, zero-padded: lexicographic order == index order.
    char buf[18];
    std::snprintf(buf, sizeof(buf), "02:00:00:00:%02zx:%02zx", (i >> 8) & 0xff, i & 0xff);
    return buf;
}

double path_loss_rss(const RadioMapConfig& cfg, const Position& fp, const Position& wap) {
    const double dx = fp.x - wap.x;
    const double dy = fp.y - wap.y;
    const double d = std::max(std::sqrt(dx * dx + dy * dy), 1.0);  // d0 = 1 m clamp
    return cfg.tx_power_dbm - 10.0 * cfg.path_loss_exponent * std::log10(d);
}

void validate(const RadioMapConfig& cfg) {
    if (cfg.width <= 0.0 || cfg.height <= 0.0) {
        throw ContractViolation("generate: floor extents must be positive");
    }
    if (cfg.n_waps == 0 || cfg.n_fps == 0) {
        throw ContractViolation("generate: n_waps and n_fps must be positive");
    }
    if (cfg.shadowing_sigma < 0.0) {
        throw ContractViolation("generate: shadowing sigma must be non-negative");
    }
    if (cfg.detection_threshold >= cfg.tx_power_dbm) {
        throw ContractViolation("generate: detection threshold must be below tx power");
    }
    if (cfg.n_waps > 0x10000) {
        throw ContractViolation("generate: at most 65536 WAPs supported");
    }
}

}  // namespace

RadioMap generate(const RadioMapConfig& cfg) {
    validate(cfg);
    RandomStream rng(cfg.seed);

    RadioMap map;
    map.waps.reserve(cfg.n_waps);
    for (std::size_t i = 0; i < cfg.n_waps; ++i) {
        const double x = rng.uniform(0.0, cfg.width);
        const double y = rng.uniform(0.0, cfg.height);
        map.waps.push_back({mac_for(i), {x, y}});
    }

    // Grid layout: smallest lattice with at least n_fps cells, row-major,
    // points at cell centers.
    std::size_t grid_cols = 0, grid_rows = 0;
    if (cfg.grid_placement) {
        grid_cols = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(cfg.n_fps) * cfg.width / cfg.height)));
        grid_cols = std::max<std::size_t>(grid_cols, 1);
        grid_rows = (cfg.n_fps + grid_cols - 1) / grid_cols;
    }

    map.fingerprints.reserve(cfg.n_fps);
    for (std::size_t i = 0; i < cfg.n_fps; ++i) {
        Fingerprint fp;
        fp.fp_id = static_cast<std::int64_t>(i);
        fp.floor = cfg.floor;

        for (int attempt = 0;; ++attempt) {
            if (attempt >= 100) {
                throw GenerationError("generate: fingerprint " + std::to_string(i) +
                                      " observed no WAP after 100 placement attempts; raise "
                                      "the detection threshold or WAP density");
            }
            if (cfg.grid_placement && attempt == 0) {
                const std::size_t col = i % grid_cols;
                const std::size_t row = i / grid_cols;
                fp.position.x = (static_cast<double>(col) + 0.5) * cfg.width /
                                static_cast<double>(grid_cols);
                fp.position.y = (static_cast<double>(row) + 0.5) * cfg.height /
                                static_cast<double>(grid_rows);
            } else {
                fp.position.x = rng.uniform(0.0, cfg.width);
                fp.position.y = rng.uniform(0.0, cfg.height);
            }
            fp.observations.clear();
            for (const WapPlacement& wap : map.waps) {
                const double rss = path_loss_rss(cfg, fp.position, wap.position) +
                                   cfg.shadowing_sigma * rng.gaussian();
                if (rss >= cfg.detection_threshold) {
                    fp.observations.emplace(wap.mac, rss);
                }
            }
            if (!fp.observations.empty()) break;
        }
        map.fingerprints.push_back(std::move(fp));
    }
    return map;
}

OutlierInjection inject_outliers(const std::vector<Fingerprint>& fps, double fraction,
                                 std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0) {
        throw ContractViolation("inject_outliers: fraction must be in [0, 1]");
    }
    OutlierInjection out;
    out.fingerprints = fps;
    if (fps.empty() || fraction == 0.0) return out;

    double min_x = fps.front().position.x, max_x = min_x;
    double min_y = fps.front().position.y, max_y = min_y;
    for (const Fingerprint& fp : fps) {
        min_x = std::min(min_x, fp.position.x);
        max_x = std::max(max_x, fp.position.x);
        min_y = std::min(min_y, fp.position.y);
        max_y = std::max(max_y, fp.position.y);
    }

    const std::size_t m = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(fps.size())));

    RandomStream rng(seed);
    std::vector<std::size_t> order(fps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<std::size_t> chosen(order.begin(), order.begin() + m);
    std::sort(chosen.begin(), chosen.end());

    for (std::size_t idx : chosen) {
        Fingerprint& fp = out.fingerprints[idx];
        fp.position.x = rng.uniform(min_x, max_x);
        fp.position.y = rng.uniform(min_y, max_y);
        out.corrupted_ids.push_back(fp.fp_id);
    }
    std::sort(out.corrupted_ids.begin(), out.corrupted_ids.end());
    return out;
}

void write_dataset(const RadioMap& map, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    std::ofstream fps(dir / "fingerprints.csv");
    if (!fps) throw IoError("cannot write " + (dir / "fingerprints.csv").string());
    fps << "fp_id,floor,x,y\n";
    for (const Fingerprint& fp : map.fingerprints) {
        fps << fp.fp_id << ',' << fp.floor << ',' << csv::format_double(fp.position.x) << ','
            << csv::format_double(fp.position.y) << '\n';
    }

    std::ofstream obs(dir / "observations.csv");
    if (!obs) throw IoError("cannot write " + (dir / "observations.csv").string());
    obs << "fp_id,mac,rss_dbm\n";
    for (const Fingerprint& fp : map.fingerprints) {
        for (const auto& [mac, rss] : fp.observations) {
            obs << fp.fp_id << ',' << mac << ',' << csv::format_double(rss) << '\n';
        }
    }

    std::ofstream waps(dir / "waps_truth.csv");
    if (!waps) throw IoError("cannot write " + (dir / "waps_truth.csv").string());
    waps << "mac,x,y\n";
    for (const WapPlacement& wap : map.waps) {
        waps << wap.mac << ',' << csv::format_double(wap.position.x) << ','
             << csv::format_double(wap.position.y) << '\n';
    }
}

}  // namespace dnl
