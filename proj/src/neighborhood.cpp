#include "dnl/neighborhood.hpp"

#include <algorithm>
#include <cmath>

#include "dnl/errors.hpp"

namespace dnl {

double manhattan_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ContractViolation("manhattan_distance: length mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return sum;
}

LocalCommunity select_neighbors(const Fingerprint& target,
                                const std::vector<Fingerprint>& candidates,
                                std::size_t k, const WapIndex& index) {
    if (k == 0) throw ContractViolation("select_neighbors: k must be positive");
    if (candidates.size() < k) throw InsufficientCandidatesError(candidates.size(), k);

    const std::vector<double> target_vec = rss_vector(target, index);

    struct Scored {
        double distance;
        std::size_t pos;
        std::int64_t fp_id;
    };
    std::vector<Scored> scored;
    scored.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Fingerprint& c = candidates[i];
        if (c.fp_id == target.fp_id) {
            throw ContractViolation("select_neighbors: target fp_id " +
                                    std::to_string(target.fp_id) + " present among candidates");
        }
        scored.push_back({manhattan_distance(target_vec, rss_vector(c, index)), i, c.fp_id});
    }

    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(),
                      [](const Scored& a, const Scored& b) {
                          if (a.distance != b.distance) return a.distance < b.distance;
                          return a.fp_id < b.fp_id;
                      });

    LocalCommunity community;
    community.target = target;
    community.neighbors.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        community.neighbors.emplace_back(candidates[scored[i].pos], scored[i].distance);
    }
    return community;
}

Position knn_predict(const Fingerprint& target, const std::vector<Fingerprint>& train,
                     std::size_t k, const WapIndex& index) {
    const LocalCommunity community = select_neighbors(target, train, k, index);
    Position mean{0.0, 0.0};
    for (const auto& [fp, d] : community.neighbors) {
        mean.x += fp.position.x;
        mean.y += fp.position.y;
    }
    mean.x /= static_cast<double>(k);
    mean.y /= static_cast<double>(k);
    return mean;
}

Position wknn_predict(const Fingerprint& target, const std::vector<Fingerprint>& train,
                      std::size_t k, const WapIndex& index) {
    const LocalCommunity community = select_neighbors(target, train, k, index);

    // Exact matches dominate: average only the zero-distance neighbors.
    std::size_t exact = 0;
    Position exact_mean{0.0, 0.0};
    for (const auto& [fp, d] : community.neighbors) {
        if (d == 0.0) {
            exact_mean.x += fp.position.x;
            exact_mean.y += fp.position.y;
            ++exact;
        }
    }
    if (exact > 0) {
        exact_mean.x /= static_cast<double>(exact);
        exact_mean.y /= static_cast<double>(exact);
        return exact_mean;
    }

    double wsum = 0.0;
    Position acc{0.0, 0.0};
    for (const auto& [fp, d] : community.neighbors) {
        const double w = 1.0 / d;
        acc.x += w * fp.position.x;
        acc.y += w * fp.position.y;
        wsum += w;
    }
    return {acc.x / wsum, acc.y / wsum};
}

}  // namespace dnl
