#include "dnl/layers.hpp"

#include <string>

#include "dnl/errors.hpp"

namespace dnl {

Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& b) {
    if (b.rows != 1 || b.cols != w.cols) {
        throw ContractViolation("linear_forward: bias must be [1 x " + std::to_string(w.cols) +
                                "]");
    }
    Tensor y = matmul(x, w);
    for (std::size_t i = 0; i < y.rows; ++i) {
        for (std::size_t j = 0; j < y.cols; ++j) {
            y.at(i, j) += b.at(0, j);
        }
    }
    return y;
}

LinearGrads linear_backward(const Tensor& x, const Tensor& w, const Tensor& dy) {
    LinearGrads g;
    g.dx = matmul_trans_b(dy, w);    // dY W^T
    g.dw = matmul_trans_a(x, dy);    // X^T dY
    g.db = Tensor(1, dy.cols);
    for (std::size_t i = 0; i < dy.rows; ++i) {
        for (std::size_t j = 0; j < dy.cols; ++j) {
            g.db.at(0, j) += dy.at(i, j);
        }
    }
    return g;
}

Tensor relu(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.data) {
        if (v < 0.0) v = 0.0;
    }
    return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& dy) {
    if (!x.same_shape(dy)) throw ContractViolation("relu_backward: shape mismatch");
    Tensor dx = dy;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        if (x.data[i] <= 0.0) dx.data[i] = 0.0;
    }
    return dx;
}

Tensor embedding_forward(const Tensor& table, std::span<const std::size_t> ids) {
    Tensor out(ids.size(), table.cols);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] >= table.rows) {
            throw ContractViolation("embedding_forward: id " + std::to_string(ids[i]) +
                                    " out of range (table has " + std::to_string(table.rows) +
                                    " rows)");
        }
        for (std::size_t j = 0; j < table.cols; ++j) {
            out.at(i, j) = table.at(ids[i], j);
        }
    }
    return out;
}

void embedding_backward(std::span<const std::size_t> ids, const Tensor& dy, Tensor& dtable) {
    if (dy.rows != ids.size() || dy.cols != dtable.cols) {
        throw ContractViolation("embedding_backward: shape mismatch");
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = 0; j < dy.cols; ++j) {
            dtable.at(ids[i], j) += dy.at(i, j);
        }
    }
}

namespace {
void check_edges(std::span<const GraphEdge> edges, std::size_t n) {
    for (const GraphEdge& e : edges) {
        if (e.fp_node_id >= n || e.wap_node_id >= n) {
            throw ContractViolation("gin_aggregate: edge endpoint out of range");
        }
    }
}
}  // namespace

Tensor gin_aggregate(const Tensor& h, std::span<const GraphEdge> edges, double eps) {
    check_edges(edges, h.rows);
    Tensor out = h;
    scale_inplace(out, 1.0 + eps);
    for (const GraphEdge& e : edges) {
        for (std::size_t j = 0; j < h.cols; ++j) {
            out.at(e.fp_node_id, j) += e.weight * h.at(e.wap_node_id, j);
            out.at(e.wap_node_id, j) += e.weight * h.at(e.fp_node_id, j);
        }
    }
    return out;
}

Tensor gin_aggregate_backward(const Tensor& dout, std::span<const GraphEdge> edges, double eps) {
    // The aggregation is linear and symmetric in the edge list, so the
    // adjoint has the same sparsity pattern.
    return gin_aggregate(dout, edges, eps);
}

Tensor mean_readout(const Tensor& h, const std::vector<std::vector<std::size_t>>& groups) {
    Tensor out(1, h.cols);
    for (const auto& group : groups) {
        if (group.empty()) continue;
        for (std::size_t row : group) {
            if (row >= h.rows) throw ContractViolation("mean_readout: row id out of range");
            for (std::size_t j = 0; j < h.cols; ++j) {
                out.at(0, j) += h.at(row, j) / static_cast<double>(group.size());
            }
        }
    }
    return out;
}

Tensor mean_readout_backward(const Tensor& dout,
                             const std::vector<std::vector<std::size_t>>& groups,
                             std::size_t n_rows) {
    Tensor dh(n_rows, dout.cols);
    for (const auto& group : groups) {
        if (group.empty()) continue;
        const double inv = 1.0 / static_cast<double>(group.size());
        for (std::size_t row : group) {
            for (std::size_t j = 0; j < dout.cols; ++j) {
                dh.at(row, j) += dout.at(0, j) * inv;
            }
        }
    }
    return dh;
}

double mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) throw ContractViolation("mse_loss: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double d = pred.data[i] - target.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.data.size());
}

Tensor mse_loss_backward(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) throw ContractViolation("mse_loss_backward: shape mismatch");
    Tensor d = pred;
    const double scale = 2.0 / static_cast<double>(pred.data.size());
    for (std::size_t i = 0; i < d.data.size(); ++i) {
        d.data[i] = scale * (pred.data[i] - target.data[i]);
    }
    return d;
}

}  // namespace dnl
