#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "dnl/fingerprint.hpp"
#include "dnl/neighborhood.hpp"

namespace dnl {

/// Coordinate and RSS normalization constants, fitted on training data only.
/// The RSS anchors are fixed (-100 / -30 dBm) so train and inference encode
/// edges identically regardless of the data seen.
struct NormalizationParams {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double scale = 1.0;            // isotropic, meters
    double rss_floor = -100.0;     // dBm -> weight 0
    double rss_ceil = -30.0;       // dBm -> weight 1

    Position normalize(const Position& p) const {
        return {(p.x - origin_x) / scale, (p.y - origin_y) / scale};
    }
    Position denormalize(const Position& p) const {
        return {origin_x + scale * p.x, origin_y + scale * p.y};
    }
};

NormalizationParams fit_normalization(const std::vector<Fingerprint>& train_fps);

/// Maps RSS in dBm to an edge weight in [0, 1]; stronger signal, larger weight.
double edge_weight(double rss_dbm, const NormalizationParams& norm);

struct FpNode {
    std::size_t node_id;   // row in the stacked node table
    std::int64_t fp_id;
    double x_norm;
    double y_norm;
    double is_target;      // exactly one node carries 1; its coords are (0, 0)
};

struct WapNode {
    std::size_t node_id;
    std::size_t mac_index;  // 0 = shared unknown-MAC bucket
};

struct GraphEdge {
    std::size_t fp_node_id;
    std::size_t wap_node_id;
    double weight;          // in [0, 1]; consumed in both directions
};

/// Heterogeneous community graph. FP nodes come first (target at node 0),
/// WAP nodes follow in ascending mac_index order; node ids are row indices
/// into that stacking.
struct CommunityGraph {
    std::vector<FpNode> fp_nodes;
    std::vector<WapNode> wap_nodes;
    std::vector<GraphEdge> edges;
    std::optional<Position> label;  // target position in meters; training only
    NormalizationParams norm;

    std::size_t node_count() const { return fp_nodes.size() + wap_nodes.size(); }
};

/// Encodes a local community as a graph. Neighbor FP features carry their
/// normalized position; the target's position is masked to (0, 0) and flagged.
/// Unknown MACs collapse into one bucket node; when several unknown MACs of
/// the same fingerprint merge, the edge keeps their maximum weight.
CommunityGraph build_graph(const LocalCommunity& community, const NormalizationParams& norm,
                           const WapIndex& index, bool labeled);

void dump_graph_json(const CommunityGraph& graph, const std::filesystem::path& file);

}  // namespace dnl
