#pragma once

#include <span>
#include <vector>

#include "dnl/community_graph.hpp"
#include "dnl/tensor.hpp"

namespace dnl {

/// y = xW + b, with b broadcast over rows. x [n x d_in], W [d_in x d_out],
/// b [1 x d_out].
Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& b);

struct LinearGrads {
    Tensor dx;
    Tensor dw;
    Tensor db;
};
LinearGrads linear_backward(const Tensor& x, const Tensor& w, const Tensor& dy);

Tensor relu(const Tensor& x);
/// dL/dx given the pre-activation x and dL/dy.
Tensor relu_backward(const Tensor& x, const Tensor& dy);

/// Row lookup: out[i] = table[ids[i]].
Tensor embedding_forward(const Tensor& table, std::span<const std::size_t> ids);
/// Scatter-add of dY rows into dTable (accumulates).
void embedding_backward(std::span<const std::size_t> ids, const Tensor& dy, Tensor& dtable);

/// Weighted GIN aggregation over an undirected edge list:
///   out_v = (1 + eps) * h_v + sum over edges (u, v, w) of w * h_u,
/// each edge contributing to both endpoints.
Tensor gin_aggregate(const Tensor& h, std::span<const GraphEdge> edges, double eps);
/// Adjoint of gin_aggregate; structurally the same propagation applied to dOut.
Tensor gin_aggregate_backward(const Tensor& dout, std::span<const GraphEdge> edges, double eps);

/// Sum over groups of per-group mean rows. Groups must partition the row ids;
/// empty groups contribute a zero vector. Output is [1 x d].
Tensor mean_readout(const Tensor& h, const std::vector<std::vector<std::size_t>>& groups);
Tensor mean_readout_backward(const Tensor& dout,
                             const std::vector<std::vector<std::size_t>>& groups,
                             std::size_t n_rows);

/// Mean of all squared scalar residuals (2b terms for b position samples).
double mse_loss(const Tensor& pred, const Tensor& target);
Tensor mse_loss_backward(const Tensor& pred, const Tensor& target);

}  // namespace dnl
