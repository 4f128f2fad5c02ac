#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dnl/fingerprint.hpp"

namespace dnl {

/// A target fingerprint together with its k signal-space nearest neighbors,
/// ascending by (distance, fp_id).
struct LocalCommunity {
    Fingerprint target;
    std::vector<std::pair<Fingerprint, double>> neighbors;

    std::size_t k() const { return neighbors.size(); }
};

/// Sum of per-slot absolute RSS differences over the padded signal space.
double manhattan_distance(std::span<const double> a, std::span<const double> b);

/// Selects the k candidates closest to `target` in signal space.
/// Ties break toward the smaller fp_id. The target itself must not be among
/// the candidates (checked by fp_id).
LocalCommunity select_neighbors(const Fingerprint& target,
                                const std::vector<Fingerprint>& candidates,
                                std::size_t k, const WapIndex& index);

/// Arithmetic mean of the k nearest neighbors' positions.
Position knn_predict(const Fingerprint& target, const std::vector<Fingerprint>& train,
                     std::size_t k, const WapIndex& index);

/// Inverse-distance weighted mean of the k nearest neighbors' positions.
/// Whenever a neighbor matches exactly (distance 0), the estimate is the
/// plain mean of all zero-distance neighbors.
Position wknn_predict(const Fingerprint& target, const std::vector<Fingerprint>& train,
                      std::size_t k, const WapIndex& index);

}  // namespace dnl
