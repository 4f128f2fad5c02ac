#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dnl/community_graph.hpp"
#include "dnl/fingerprint.hpp"
#include "dnl/rng.hpp"
#include "dnl/tensor.hpp"

namespace dnl {

struct ModelConfig {
    std::size_t k = 10;             // community size used at inference
    std::size_t latent_dim = 8;     // extractor / embedding / GIN width
    std::size_t head_hidden = 64;
    double gin_eps = 0.0;
    std::uint64_t seed = 0;
};

/// Position regressor over community graphs:
///   - 3-layer perceptron (x_norm, y_norm, is_target) -> latent, for FP nodes
///   - embedding table for WAP nodes (row 0 = unknown-MAC bucket)
///   - two edge-weighted GIN layers, each with an internal 2-layer MLP
///   - mean readout per node type (target, neighbor FPs, WAPs), summed
///   - 2-layer head projecting the graph embedding to a normalized position
struct DnlModel {
    ModelConfig config;
    NormalizationParams norm;
    WapIndex wap_index;

    Tensor fp_w1, fp_b1, fp_w2, fp_b2, fp_w3, fp_b3;
    Tensor wap_embedding;  // (wap_index.size() + 1) x latent_dim
    Tensor gin1_w1, gin1_b1, gin1_w2, gin1_b2;
    Tensor gin2_w1, gin2_b1, gin2_w2, gin2_b2;
    Tensor head_w1, head_b1, head_w2, head_b2;

    /// Stable (name, tensor) enumeration; initialisation draws, Adam state,
    /// gradients, and checkpoints all share this order.
    std::vector<std::pair<std::string, Tensor*>> named_tensors();
    std::vector<std::pair<std::string, const Tensor*>> named_tensors() const;
    std::vector<Tensor*> tensors();
};

/// Allocates all tensors and draws the initial weights from `rng`:
/// uniform ±sqrt(6 / (fan_in + fan_out)) for linear weights, zero biases,
/// N(0, 1) * 0.1 for the embedding table.
DnlModel init_model(const ModelConfig& config, const NormalizationParams& norm,
                    WapIndex wap_index, RandomStream& rng);

/// Intermediate activations of one forward pass, kept for the backward pass.
struct ForwardCache {
    std::vector<std::size_t> fp_rows;   // graph fp_nodes[i] -> row in the node table
    std::vector<std::size_t> wap_rows;
    std::vector<std::size_t> wap_ids;   // mac indices in wap_nodes order
    std::vector<std::vector<std::size_t>> groups;
    Tensor x_fp;
    Tensor fp_a1, fp_z1, fp_a2, fp_z2, fp_latent;
    Tensor wap_latent;
    Tensor h0;
    Tensor s1, g1_hidden, g1_act, g1_out, r1;
    Tensor s2, g2_hidden, g2_act, g2_out, r2;
    Tensor readout;
    Tensor head_hidden_pre, head_hidden_act;
    Tensor output;
};

/// Runs the network on one graph; returns the position in normalized
/// coordinates. Pass a cache to enable a subsequent backward().
Position forward(const DnlModel& model, const CommunityGraph& graph,
                 ForwardCache* cache = nullptr);

std::vector<Tensor> zero_gradients(const DnlModel& model);

/// Accumulates dLoss/dParam into `grads` (named_tensors order), given the
/// loss gradient w.r.t. the normalized output position.
void backward(const DnlModel& model, const CommunityGraph& graph, const ForwardCache& cache,
              const Position& dpred, std::vector<Tensor>& grads);

/// Full inference path: community from `train_fps` (minus the target's own
/// fp_id), unlabeled graph, forward, denormalize to meters.
Position predict(const DnlModel& model, const Fingerprint& target,
                 const std::vector<Fingerprint>& train_fps);

}  // namespace dnl
