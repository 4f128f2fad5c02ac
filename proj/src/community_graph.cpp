#include "dnl/community_graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"

#include "dnl/errors.hpp"

namespace dnl {

NormalizationParams fit_normalization(const std::vector<Fingerprint>& train_fps) {
    if (train_fps.empty()) throw ContractViolation("fit_normalization: empty training set");
    double min_x = train_fps.front().position.x;
    double max_x = min_x;
    double min_y = train_fps.front().position.y;
    double max_y = min_y;
    for (const Fingerprint& fp : train_fps) {
        min_x = std::min(min_x, fp.position.x);
        max_x = std::max(max_x, fp.position.x);
        min_y = std::min(min_y, fp.position.y);
        max_y = std::max(max_y, fp.position.y);
    }
    NormalizationParams norm;
    norm.origin_x = min_x;
    norm.origin_y = min_y;
    norm.scale = std::max({max_x - min_x, max_y - min_y, 1.0});
    return norm;
}

double edge_weight(double rss_dbm, const NormalizationParams& norm) {
    const double w = (rss_dbm - norm.rss_floor) / (norm.rss_ceil - norm.rss_floor);
    return std::clamp(w, 0.0, 1.0);
}

CommunityGraph build_graph(const LocalCommunity& community, const NormalizationParams& norm,
                           const WapIndex& index, bool labeled) {
    CommunityGraph g;
    g.norm = norm;

    g.fp_nodes.push_back({0, community.target.fp_id, 0.0, 0.0, 1.0});
    for (std::size_t i = 0; i < community.neighbors.size(); ++i) {
        const Fingerprint& fp = community.neighbors[i].first;
        const Position p = norm.normalize(fp.position);
        g.fp_nodes.push_back({i + 1, fp.fp_id, p.x, p.y, 0.0});
    }

    // Collect the distinct WAP nodes observed anywhere in the community.
    std::set<std::size_t> mac_indices;
    const auto each_member = [&](auto&& fn) {
        fn(0, community.target);
        for (std::size_t i = 0; i < community.neighbors.size(); ++i) {
            fn(i + 1, community.neighbors[i].first);
        }
    };
    each_member([&](std::size_t, const Fingerprint& fp) {
        for (const auto& [mac, rss] : fp.observations) {
            mac_indices.insert(index.lookup(mac));
        }
    });

    const std::size_t n_fp = g.fp_nodes.size();
    std::map<std::size_t, std::size_t> mac_to_node;  // mac_index -> node_id
    for (std::size_t mac_index : mac_indices) {
        const std::size_t node_id = n_fp + g.wap_nodes.size();
        g.wap_nodes.push_back({node_id, mac_index});
        mac_to_node.emplace(mac_index, node_id);
    }

    // One edge per (member, wap-node) pair; unknown MACs of one member merge
    // into a single bucket edge carrying their maximum weight.
    each_member([&](std::size_t fp_node, const Fingerprint& fp) {
        std::map<std::size_t, double> weights;  // wap node_id -> weight
        for (const auto& [mac, rss] : fp.observations) {
            const std::size_t node_id = mac_to_node.at(index.lookup(mac));
            const double w = edge_weight(rss, norm);
            const auto [it, inserted] = weights.emplace(node_id, w);
            if (!inserted) it->second = std::max(it->second, w);
        }
        for (const auto& [node_id, w] : weights) {
            g.edges.push_back({fp_node, node_id, w});
        }
    });

    if (labeled) g.label = community.target.position;
    return g;
}

void dump_graph_json(const CommunityGraph& graph, const std::filesystem::path& file) {
    nlohmann::json j;
    j["fp_nodes"] = nlohmann::json::array();
    for (const FpNode& n : graph.fp_nodes) {
        j["fp_nodes"].push_back({{"node_id", n.node_id},
                                 {"fp_id", n.fp_id},
                                 {"feature", {n.x_norm, n.y_norm, n.is_target}}});
    }
    j["wap_nodes"] = nlohmann::json::array();
    for (const WapNode& n : graph.wap_nodes) {
        j["wap_nodes"].push_back({{"node_id", n.node_id}, {"mac_index", n.mac_index}});
    }
    j["edges"] = nlohmann::json::array();
    for (const GraphEdge& e : graph.edges) {
        j["edges"].push_back({e.fp_node_id, e.wap_node_id, e.weight});
    }
    if (graph.label) {
        j["label"] = {graph.label->x, graph.label->y};
    } else {
        j["label"] = nullptr;
    }
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    out << j.dump(2) << '\n';
}

}  // namespace dnl
