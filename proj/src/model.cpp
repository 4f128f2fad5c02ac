#include "dnl/model.hpp"

#include <algorithm>
#include <cmath>

#include "dnl/errors.hpp"
#include "dnl/layers.hpp"
#include "dnl/neighborhood.hpp"

namespace dnl {

std::vector<std::pair<std::string, Tensor*>> DnlModel::named_tensors() {
    return {
        {"fp_extractor.w1", &fp_w1}, {"fp_extractor.b1", &fp_b1},
        {"fp_extractor.w2", &fp_w2}, {"fp_extractor.b2", &fp_b2},
        {"fp_extractor.w3", &fp_w3}, {"fp_extractor.b3", &fp_b3},
        {"wap_embedding", &wap_embedding},
        {"gin1.w1", &gin1_w1}, {"gin1.b1", &gin1_b1},
        {"gin1.w2", &gin1_w2}, {"gin1.b2", &gin1_b2},
        {"gin2.w1", &gin2_w1}, {"gin2.b1", &gin2_b1},
        {"gin2.w2", &gin2_w2}, {"gin2.b2", &gin2_b2},
        {"head.w1", &head_w1}, {"head.b1", &head_b1},
        {"head.w2", &head_w2}, {"head.b2", &head_b2},
    };
}

std::vector<std::pair<std::string, const Tensor*>> DnlModel::named_tensors() const {
    auto mutable_view = const_cast<DnlModel*>(this)->named_tensors();
    std::vector<std::pair<std::string, const Tensor*>> out;
    out.reserve(mutable_view.size());
    for (auto& [name, t] : mutable_view) out.emplace_back(name, t);
    return out;
}

std::vector<Tensor*> DnlModel::tensors() {
    std::vector<Tensor*> out;
    for (auto& [name, t] : named_tensors()) out.push_back(t);
    return out;
}

namespace {

void glorot_uniform(Tensor& w, RandomStream& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
    for (double& v : w.data) v = rng.uniform(-limit, limit);
}

}  // namespace

DnlModel init_model(const ModelConfig& config, const NormalizationParams& norm,
                    WapIndex wap_index, RandomStream& rng) {
    const std::size_t d = config.latent_dim;
    const std::size_t h = config.head_hidden;

    DnlModel m;
    m.config = config;
    m.norm = norm;
    m.wap_index = std::move(wap_index);

    m.fp_w1 = Tensor(3, d);
    m.fp_b1 = Tensor(1, d);
    m.fp_w2 = Tensor(d, d);
    m.fp_b2 = Tensor(1, d);
    m.fp_w3 = Tensor(d, d);
    m.fp_b3 = Tensor(1, d);
    m.wap_embedding = Tensor(m.wap_index.size() + 1, d);
    m.gin1_w1 = Tensor(d, d);
    m.gin1_b1 = Tensor(1, d);
    m.gin1_w2 = Tensor(d, d);
    m.gin1_b2 = Tensor(1, d);
    m.gin2_w1 = Tensor(d, d);
    m.gin2_b1 = Tensor(1, d);
    m.gin2_w2 = Tensor(d, d);
    m.gin2_b2 = Tensor(1, d);
    m.head_w1 = Tensor(d, h);
    m.head_b1 = Tensor(1, h);
    m.head_w2 = Tensor(h, 2);
    m.head_b2 = Tensor(1, 2);

    // Draws happen in named_tensors order so runs are reproducible.
    for (auto& [name, t] : m.named_tensors()) {
        if (name == "wap_embedding") {
            for (double& v : t->data) v = rng.gaussian() * 0.1;
        } else if (name.find(".b") == std::string::npos) {
            glorot_uniform(*t, rng);
        }  // biases stay zero
    }
    return m;
}

namespace {

/// Node-table layout shared by forward and backward. Rows are addressed by
/// node_id, so list order inside the graph does not matter.
void resolve_layout(const CommunityGraph& g, ForwardCache& c) {
    const std::size_t n = g.node_count();
    std::vector<bool> seen(n, false);
    const auto claim = [&](std::size_t id) {
        if (id >= n || seen[id]) {
            throw ContractViolation("forward: node ids must form a permutation of 0..N-1");
        }
        seen[id] = true;
    };
    c.fp_rows.clear();
    c.wap_rows.clear();
    c.wap_ids.clear();
    std::vector<std::size_t> target_rows, neighbor_rows;
    for (const FpNode& node : g.fp_nodes) {
        claim(node.node_id);
        c.fp_rows.push_back(node.node_id);
        (node.is_target == 1.0 ? target_rows : neighbor_rows).push_back(node.node_id);
    }
    for (const WapNode& node : g.wap_nodes) {
        claim(node.node_id);
        c.wap_rows.push_back(node.node_id);
        c.wap_ids.push_back(node.mac_index);
    }
    // One mean per node type: target, neighbor FPs, WAPs. Keeping the target
    // in its own group gives its signature full weight in the sum instead of
    // being averaged away among the k neighbors.
    c.groups = {target_rows, neighbor_rows, c.wap_rows};
}

}  // namespace

Position forward(const DnlModel& model, const CommunityGraph& graph, ForwardCache* cache) {
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    resolve_layout(graph, c);

    const std::size_t d = model.config.latent_dim;
    const std::size_t n = graph.node_count();

    c.x_fp = Tensor(graph.fp_nodes.size(), 3);
    for (std::size_t i = 0; i < graph.fp_nodes.size(); ++i) {
        const FpNode& node = graph.fp_nodes[i];
        c.x_fp.at(i, 0) = node.x_norm;
        c.x_fp.at(i, 1) = node.y_norm;
        c.x_fp.at(i, 2) = node.is_target;
    }

    c.fp_a1 = linear_forward(c.x_fp, model.fp_w1, model.fp_b1);
    c.fp_z1 = relu(c.fp_a1);
    c.fp_a2 = linear_forward(c.fp_z1, model.fp_w2, model.fp_b2);
    c.fp_z2 = relu(c.fp_a2);
    c.fp_latent = linear_forward(c.fp_z2, model.fp_w3, model.fp_b3);

    c.wap_latent = embedding_forward(model.wap_embedding, c.wap_ids);

    c.h0 = Tensor(n, d);
    for (std::size_t i = 0; i < c.fp_rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) c.h0.at(c.fp_rows[i], j) = c.fp_latent.at(i, j);
    }
    for (std::size_t i = 0; i < c.wap_rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) c.h0.at(c.wap_rows[i], j) = c.wap_latent.at(i, j);
    }

    c.s1 = gin_aggregate(c.h0, graph.edges, model.config.gin_eps);
    c.g1_hidden = linear_forward(c.s1, model.gin1_w1, model.gin1_b1);
    c.g1_act = relu(c.g1_hidden);
    c.g1_out = linear_forward(c.g1_act, model.gin1_w2, model.gin1_b2);
    c.r1 = relu(c.g1_out);

    c.s2 = gin_aggregate(c.r1, graph.edges, model.config.gin_eps);
    c.g2_hidden = linear_forward(c.s2, model.gin2_w1, model.gin2_b1);
    c.g2_act = relu(c.g2_hidden);
    c.g2_out = linear_forward(c.g2_act, model.gin2_w2, model.gin2_b2);
    c.r2 = relu(c.g2_out);

    c.readout = mean_readout(c.r2, c.groups);

    c.head_hidden_pre = linear_forward(c.readout, model.head_w1, model.head_b1);
    c.head_hidden_act = relu(c.head_hidden_pre);
    c.output = linear_forward(c.head_hidden_act, model.head_w2, model.head_b2);

    return {c.output.at(0, 0), c.output.at(0, 1)};
}

std::vector<Tensor> zero_gradients(const DnlModel& model) {
    std::vector<Tensor> grads;
    for (const auto& [name, t] : model.named_tensors()) {
        grads.emplace_back(t->rows, t->cols);
    }
    return grads;
}

void backward(const DnlModel& model, const CommunityGraph& graph, const ForwardCache& c,
              const Position& dpred, std::vector<Tensor>& grads) {
    enum TensorId {
        kFpW1, kFpB1, kFpW2, kFpB2, kFpW3, kFpB3,
        kEmbedding,
        kGin1W1, kGin1B1, kGin1W2, kGin1B2,
        kGin2W1, kGin2B1, kGin2W2, kGin2B2,
        kHeadW1, kHeadB1, kHeadW2, kHeadB2,
        kTensorCount,
    };
    if (grads.size() != kTensorCount) {
        throw ContractViolation("backward: gradient list size mismatch");
    }

    Tensor doutput(1, 2);
    doutput.at(0, 0) = dpred.x;
    doutput.at(0, 1) = dpred.y;

    // Head.
    LinearGrads head2 = linear_backward(c.head_hidden_act, model.head_w2, doutput);
    add_inplace(grads[kHeadW2], head2.dw);
    add_inplace(grads[kHeadB2], head2.db);
    Tensor dhead_pre = relu_backward(c.head_hidden_pre, head2.dx);
    LinearGrads head1 = linear_backward(c.readout, model.head_w1, dhead_pre);
    add_inplace(grads[kHeadW1], head1.dw);
    add_inplace(grads[kHeadB1], head1.db);

    // Readout back to node embeddings.
    Tensor dr2 = mean_readout_backward(head1.dx, c.groups, c.r2.rows);

    // GIN layer 2.
    Tensor dg2_out = relu_backward(c.g2_out, dr2);
    LinearGrads g2b = linear_backward(c.g2_act, model.gin2_w2, dg2_out);
    add_inplace(grads[kGin2W2], g2b.dw);
    add_inplace(grads[kGin2B2], g2b.db);
    Tensor dg2_hidden = relu_backward(c.g2_hidden, g2b.dx);
    LinearGrads g2a = linear_backward(c.s2, model.gin2_w1, dg2_hidden);
    add_inplace(grads[kGin2W1], g2a.dw);
    add_inplace(grads[kGin2B1], g2a.db);
    Tensor dr1 = gin_aggregate_backward(g2a.dx, graph.edges, model.config.gin_eps);

    // GIN layer 1.
    Tensor dg1_out = relu_backward(c.g1_out, dr1);
    LinearGrads g1b = linear_backward(c.g1_act, model.gin1_w2, dg1_out);
    add_inplace(grads[kGin1W2], g1b.dw);
    add_inplace(grads[kGin1B2], g1b.db);
    Tensor dg1_hidden = relu_backward(c.g1_hidden, g1b.dx);
    LinearGrads g1a = linear_backward(c.s1, model.gin1_w1, dg1_hidden);
    add_inplace(grads[kGin1W1], g1a.dw);
    add_inplace(grads[kGin1B1], g1a.db);
    Tensor dh0 = gin_aggregate_backward(g1a.dx, graph.edges, model.config.gin_eps);

    // Split the node table back into FP and WAP parts.
    const std::size_t d = model.config.latent_dim;
    Tensor dfp_latent(c.fp_rows.size(), d);
    for (std::size_t i = 0; i < c.fp_rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) dfp_latent.at(i, j) = dh0.at(c.fp_rows[i], j);
    }
    Tensor dwap_latent(c.wap_rows.size(), d);
    for (std::size_t i = 0; i < c.wap_rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) dwap_latent.at(i, j) = dh0.at(c.wap_rows[i], j);
    }

    embedding_backward(c.wap_ids, dwap_latent, grads[kEmbedding]);

    // FP extractor.
    LinearGrads fp3 = linear_backward(c.fp_z2, model.fp_w3, dfp_latent);
    add_inplace(grads[kFpW3], fp3.dw);
    add_inplace(grads[kFpB3], fp3.db);
    Tensor dfp_a2 = relu_backward(c.fp_a2, fp3.dx);
    LinearGrads fp2 = linear_backward(c.fp_z1, model.fp_w2, dfp_a2);
    add_inplace(grads[kFpW2], fp2.dw);
    add_inplace(grads[kFpB2], fp2.db);
    Tensor dfp_a1 = relu_backward(c.fp_a1, fp2.dx);
    LinearGrads fp1 = linear_backward(c.x_fp, model.fp_w1, dfp_a1);
    add_inplace(grads[kFpW1], fp1.dw);
    add_inplace(grads[kFpB1], fp1.db);
}

Position predict(const DnlModel& model, const Fingerprint& target,
                 const std::vector<Fingerprint>& train_fps) {
    std::vector<Fingerprint> candidates;
    candidates.reserve(train_fps.size());
    for (const Fingerprint& fp : train_fps) {
        if (fp.fp_id != target.fp_id) candidates.push_back(fp);
    }
    const LocalCommunity community =
        select_neighbors(target, candidates, model.config.k, model.wap_index);
    const CommunityGraph graph =
        build_graph(community, model.norm, model.wap_index, /*labeled=*/false);
    const Position out = forward(model, graph);
    return model.norm.denormalize(out);
}

}  // namespace dnl
