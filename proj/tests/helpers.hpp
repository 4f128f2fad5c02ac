#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "dnl/fingerprint.hpp"
#include "dnl/rng.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("dnl_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

inline dnl::Fingerprint make_fp(std::int64_t id, double x, double y,
                                std::initializer_list<std::pair<std::string, double>> obs,
                                int floor = 0) {
    dnl::Fingerprint fp;
    fp.fp_id = id;
    fp.floor = floor;
    fp.position = {x, y};
    for (const auto& [mac, rss] : obs) fp.observations.emplace(mac, rss);
    return fp;
}

/// Random dataset over a small shared MAC pool; every fingerprint observes
/// at least one WAP.
inline std::vector<dnl::Fingerprint> random_dataset(dnl::RandomStream& rng, std::size_t n_fps,
                                                    std::size_t n_macs, double extent = 100.0) {
    std::vector<std::string> macs;
    for (std::size_t i = 0; i < n_macs; ++i) {
        macs.push_back("aa:bb:" + std::to_string(i / 10) + std::to_string(i % 10));
    }
    std::vector<dnl::Fingerprint> fps;
    fps.reserve(n_fps);
    for (std::size_t i = 0; i < n_fps; ++i) {
        dnl::Fingerprint fp;
        fp.fp_id = static_cast<std::int64_t>(i);
        fp.position = {rng.uniform(0.0, extent), rng.uniform(0.0, extent * 0.8)};
        while (fp.observations.empty()) {
            for (const std::string& mac : macs) {
                if (rng.next_unit() < 0.6) {
                    fp.observations.emplace(mac, rng.uniform(-95.0, -30.0));
                }
            }
        }
        fps.push_back(std::move(fp));
    }
    return fps;
}

}  // namespace testutil
