#pragma once

#include <cstdint>
#include <vector>

#include "dnl/tensor.hpp"

namespace dnl {

/// Adam with bias correction. Moment buffers mirror the parameter list; the
/// pairing is positional, so callers must keep a stable parameter order.
struct AdamState {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t step = 0;
    std::vector<Tensor> m;
    std::vector<Tensor> v;

    static AdamState create(const std::vector<Tensor*>& params, double lr);
};

void adam_step(const std::vector<Tensor*>& params, const std::vector<Tensor>& grads,
               AdamState& state);

/// Scales all gradients by max_norm / ||g||₂ when the global norm exceeds
/// max_norm. Returns the pre-clip norm.
double clip_global_norm(std::vector<Tensor>& grads, double max_norm);

/// Cuts the learning rate by `factor` after `patience` consecutive epochs
/// without a strict validation-loss improvement, never below min_lr.
class PlateauScheduler {
public:
    explicit PlateauScheduler(double initial_lr, double factor = 0.1, int patience = 3,
                              double min_lr = 0.0001);

    void step(double val_loss);

    double lr() const { return current_lr_; }
    double best_loss() const { return best_val_loss_; }
    int epochs_since_improvement() const { return epochs_since_improvement_; }

private:
    double factor_;
    int patience_;
    double min_lr_;
    double current_lr_;
    double best_val_loss_;
    int epochs_since_improvement_ = 0;
};

}  // namespace dnl
