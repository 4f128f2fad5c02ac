#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace dnl {

/// SplitMix64 (Steele, Lea, Flood; public domain reference constants).
///
/// Every random draw in the pipeline flows through this generator. The
/// algorithm identity is fixed on purpose: dataset splits, synthetic maps,
/// and weight initialisation must stay bit-stable across releases, so we do
/// not rely on std::shuffle or the standard distributions (their output is
/// implementation-defined).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

/// Derives an independent stream seed from a base seed and a label.
/// FNV-1a over the label, mixed with the base seed through one SplitMix64 step.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream_name);

/// Deterministic random stream with the handful of draws the pipeline needs.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_.next(); }

    /// Uniform in [0, 1), 53-bit mantissa.
    double next_unit() {
        return static_cast<double>(gen_.next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log() argument.
    double next_open_unit() {
        return static_cast<double>((gen_.next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform in [0, bound) via multiply-shift. bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_.next()) * bound) >> 64);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Standard normal via Box-Muller; the paired draw is cached.
    double gaussian();

    /// Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i + 1));
            std::swap(v[i], v[j]);
        }
    }

private:
    SplitMix64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace dnl
