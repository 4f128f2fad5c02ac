#include "dnl/optim.hpp"

#include <cmath>
#include <limits>

#include "dnl/errors.hpp"

namespace dnl {

AdamState AdamState::create(const std::vector<Tensor*>& params, double lr) {
    AdamState st;
    st.lr = lr;
    st.m.reserve(params.size());
    st.v.reserve(params.size());
    for (const Tensor* p : params) {
        st.m.emplace_back(p->rows, p->cols);
        st.v.emplace_back(p->rows, p->cols);
    }
    return st;
}

void adam_step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads,
               AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw ContractViolation("adam_step: parameter/gradient/state count mismatch");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const Tensor& g = grads[i];
        if (!p.same_shape(g)) throw ContractViolation("adam_step: gradient shape mismatch");
        Tensor& m = state.m[i];
        Tensor& v = state.v[i];
        for (std::size_t j = 0; j < p.data.size(); ++j) {
            m.data[j] = state.beta1 * m.data[j] + (1.0 - state.beta1) * g.data[j];
            v.data[j] = state.beta2 * v.data[j] + (1.0 - state.beta2) * g.data[j] * g.data[j];
            const double m_hat = m.data[j] / bc1;
            const double v_hat = v.data[j] / bc2;
            p.data[j] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    }
}

double clip_global_norm(std::vector<Tensor>& grads, double max_norm) {
    double sq = 0.0;
    for (const Tensor& g : grads) {
        for (double v : g.data) sq += v * v;
    }
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double s = max_norm / norm;
        for (Tensor& g : grads) scale_inplace(g, s);
    }
    return norm;
}

PlateauScheduler::PlateauScheduler(double initial_lr, double factor, int patience, double min_lr)
    : factor_(factor),
      patience_(patience),
      min_lr_(min_lr),
      current_lr_(initial_lr),
      best_val_loss_(std::numeric_limits<double>::infinity()) {}

void PlateauScheduler::step(double val_loss) {
    if (val_loss < best_val_loss_) {
        best_val_loss_ = val_loss;
        epochs_since_improvement_ = 0;
        return;
    }
    ++epochs_since_improvement_;
    if (epochs_since_improvement_ >= patience_) {
        current_lr_ = std::max(current_lr_ * factor_, min_lr_);
        epochs_since_improvement_ = 0;
    }
}

}  // namespace dnl
