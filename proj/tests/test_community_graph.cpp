#include "doctest.h"

#include <set>

#include "dnl/community_graph.hpp"
#include "dnl/errors.hpp"
#include "dnl/neighborhood.hpp"
#include "dnl/rng.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dnl;
using testutil::make_fp;

TEST_CASE("fit_normalization takes per-axis minima and the larger extent") {
    {
        const auto norm = fit_normalization(
            {make_fp(0, 0, 0, {{"m", -50.0}}), make_fp(1, 100, 40, {{"m", -50.0}})});
        CHECK(norm.origin_x == 0.0);
        CHECK(norm.origin_y == 0.0);
        CHECK(norm.scale == 100.0);
    }
    {
        const auto norm = fit_normalization({make_fp(0, 5, 5, {{"m", -50.0}})});
        CHECK(norm.origin_x == 5.0);
        CHECK(norm.origin_y == 5.0);
        CHECK(norm.scale == 1.0);  // degenerate extent floors at 1 m
    }
    {
        const auto norm = fit_normalization(
            {make_fp(0, -10, 0, {{"m", -50.0}}), make_fp(1, 10, 80, {{"m", -50.0}})});
        CHECK(norm.origin_x == -10.0);
        CHECK(norm.origin_y == 0.0);
        CHECK(norm.scale == 80.0);  // max(20, 80)
    }
    CHECK(fit_normalization({make_fp(0, 1, 2, {{"m", -50.0}})}).rss_floor == -100.0);
    CHECK(fit_normalization({make_fp(0, 1, 2, {{"m", -50.0}})}).rss_ceil == -30.0);
}

TEST_CASE("edge_weight maps the dBm range onto [0, 1] linearly") {
    const NormalizationParams norm;
    CHECK(edge_weight(-30.0, norm) == 1.0);
    CHECK(edge_weight(-100.0, norm) == 0.0);
    CHECK(edge_weight(-65.0, norm) == 0.5);
    CHECK(edge_weight(-20.0, norm) == 1.0);   // clamped
    CHECK(edge_weight(-120.0, norm) == 0.0);  // clamped
}

namespace {

LocalCommunity abc_community() {
    LocalCommunity c;
    c.target = make_fp(0, 10, 10, {{"A", -40.0}, {"B", -50.0}});
    c.neighbors = {
        {make_fp(1, 20, 20, {{"B", -45.0}, {"C", -60.0}}), 1.0},
        {make_fp(2, 30, 30, {{"B", -70.0}}), 2.0},
    };
    return c;
}

}  // namespace

TEST_CASE("build_graph counts: members {A,B}, {B,C}, {B}") {
    const LocalCommunity community = abc_community();
    std::vector<Fingerprint> corpus = {community.target, community.neighbors[0].first,
                                       community.neighbors[1].first};
    const WapIndex index = build_wap_index(corpus);
    const NormalizationParams norm = fit_normalization(corpus);
    const CommunityGraph g = build_graph(community, norm, index, true);

    CHECK(g.fp_nodes.size() == 3);
    CHECK(g.wap_nodes.size() == 3);
    CHECK(g.edges.size() == 5);  // 2 + 2 + 1 observation pairs

    // target first, masked to the origin, flagged
    CHECK(g.fp_nodes[0].is_target == 1.0);
    CHECK(g.fp_nodes[0].x_norm == 0.0);
    CHECK(g.fp_nodes[0].y_norm == 0.0);
    CHECK(g.fp_nodes[1].is_target == 0.0);
    CHECK(g.fp_nodes[1].x_norm == doctest::Approx((20.0 - 10.0) / 20.0));

    CHECK(g.label.has_value());
    CHECK(g.label->x == 10.0);
    CHECK(g.label->y == 10.0);

    for (const GraphEdge& e : g.edges) {
        CHECK(e.weight >= 0.0);
        CHECK(e.weight <= 1.0);
    }
}

TEST_CASE("unknown MACs collapse into one bucket edge with the maximum weight") {
    LocalCommunity community;
    community.target = make_fp(0, 1, 1, {{"x1", -40.0}, {"x2", -80.0}});
    community.neighbors = {{make_fp(1, 2, 2, {{"A", -50.0}}), 1.0}};

    // index knows only "A"; both target MACs are unknown
    const WapIndex index = build_wap_index({make_fp(9, 0, 0, {{"A", -50.0}})});
    const NormalizationParams norm =
        fit_normalization({community.target, community.neighbors[0].first});
    const CommunityGraph g = build_graph(community, norm, index, false);

    REQUIRE(g.wap_nodes.size() == 2);  // bucket + A
    CHECK(g.wap_nodes[0].mac_index == 0);
    CHECK(g.wap_nodes[1].mac_index == 1);

    std::size_t target_bucket_edges = 0;
    double bucket_weight = -1.0;
    for (const GraphEdge& e : g.edges) {
        if (e.fp_node_id == 0 && e.wap_node_id == g.wap_nodes[0].node_id) {
            ++target_bucket_edges;
            bucket_weight = e.weight;
        }
    }
    CHECK(target_bucket_edges == 1);
    CHECK(bucket_weight == edge_weight(-40.0, norm));  // max of the two unknowns
    CHECK_FALSE(g.label.has_value());
}

TEST_CASE("graph construction is label-blind") {
    const LocalCommunity community = abc_community();
    std::vector<Fingerprint> corpus = {community.target, community.neighbors[0].first,
                                       community.neighbors[1].first};
    const WapIndex index = build_wap_index(corpus);
    const NormalizationParams norm = fit_normalization(corpus);

    const CommunityGraph labeled = build_graph(community, norm, index, true);
    const CommunityGraph unlabeled = build_graph(community, norm, index, false);

    CHECK(labeled.label.has_value());
    CHECK_FALSE(unlabeled.label.has_value());
    REQUIRE(labeled.fp_nodes.size() == unlabeled.fp_nodes.size());
    for (std::size_t i = 0; i < labeled.fp_nodes.size(); ++i) {
        CHECK(labeled.fp_nodes[i].node_id == unlabeled.fp_nodes[i].node_id);
        CHECK(labeled.fp_nodes[i].fp_id == unlabeled.fp_nodes[i].fp_id);
        CHECK(labeled.fp_nodes[i].x_norm == unlabeled.fp_nodes[i].x_norm);
        CHECK(labeled.fp_nodes[i].y_norm == unlabeled.fp_nodes[i].y_norm);
        CHECK(labeled.fp_nodes[i].is_target == unlabeled.fp_nodes[i].is_target);
    }
    REQUIRE(labeled.wap_nodes.size() == unlabeled.wap_nodes.size());
    for (std::size_t i = 0; i < labeled.wap_nodes.size(); ++i) {
        CHECK(labeled.wap_nodes[i].node_id == unlabeled.wap_nodes[i].node_id);
        CHECK(labeled.wap_nodes[i].mac_index == unlabeled.wap_nodes[i].mac_index);
    }
    REQUIRE(labeled.edges.size() == unlabeled.edges.size());
    for (std::size_t i = 0; i < labeled.edges.size(); ++i) {
        CHECK(labeled.edges[i].fp_node_id == unlabeled.edges[i].fp_node_id);
        CHECK(labeled.edges[i].wap_node_id == unlabeled.edges[i].wap_node_id);
        CHECK(labeled.edges[i].weight == unlabeled.edges[i].weight);
    }
}

TEST_CASE("node and edge counts match the enumeration oracle on random communities") {
    RandomStream rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        auto fps = testutil::random_dataset(rng, 2 + rng.next_below(20), 8);
        Fingerprint target = fps.back();
        fps.pop_back();
        // 30% of targets carry a MAC the training index has never seen
        if (rng.next_unit() < 0.3) target.observations.emplace("zz:unknown", -55.0);
        if (rng.next_unit() < 0.3) target.observations.emplace("zz:other", -75.0);
        target.fp_id = 100000;

        const WapIndex index = build_wap_index(fps);
        const NormalizationParams norm = fit_normalization(fps);
        const std::size_t k = 1 + rng.next_below(fps.size());
        const LocalCommunity community = select_neighbors(target, fps, k, index);
        const CommunityGraph g = build_graph(community, norm, index, true);

        std::vector<Fingerprint> members = {community.target};
        for (const auto& [fp, d] : community.neighbors) members.push_back(fp);
        const oracle::GraphCounts expected = oracle::count_graph(members, index);

        CHECK(g.fp_nodes.size() == k + 1);
        CHECK(g.fp_nodes.size() == expected.fp_nodes);
        CHECK(g.wap_nodes.size() == expected.wap_nodes);
        CHECK(g.edges.size() == expected.edges);

        // no duplicate (fp, wap) pairs
        std::set<std::pair<std::size_t, std::size_t>> pairs;
        for (const GraphEdge& e : g.edges) {
            CHECK(pairs.emplace(e.fp_node_id, e.wap_node_id).second);
            CHECK(e.weight >= 0.0);
            CHECK(e.weight <= 1.0);
        }

        // exactly one target node at the origin
        std::size_t targets = 0;
        for (const FpNode& n : g.fp_nodes) {
            if (n.is_target == 1.0) {
                ++targets;
                CHECK(n.x_norm == 0.0);
                CHECK(n.y_norm == 0.0);
            } else {
                CHECK(n.x_norm >= -1e-9);
                CHECK(n.x_norm <= 1.0 + 1e-9);
                CHECK(n.y_norm >= -1e-9);
                CHECK(n.y_norm <= 1.0 + 1e-9);
            }
        }
        CHECK(targets == 1);
    }
}

TEST_CASE("graph json dump has the documented shape") {
    testutil::TempDir dir("gdump");
    const LocalCommunity community = abc_community();
    std::vector<Fingerprint> corpus = {community.target, community.neighbors[0].first,
                                       community.neighbors[1].first};
    const WapIndex index = build_wap_index(corpus);
    const CommunityGraph g = build_graph(community, fit_normalization(corpus), index, true);
    dump_graph_json(g, dir / "g.json");

    std::ifstream in(dir / "g.json");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"fp_nodes\"") != std::string::npos);
    CHECK(text.find("\"wap_nodes\"") != std::string::npos);
    CHECK(text.find("\"edges\"") != std::string::npos);
    CHECK(text.find("\"label\"") != std::string::npos);
}
