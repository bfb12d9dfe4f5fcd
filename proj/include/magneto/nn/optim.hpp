#pragma once

#include "magneto/nn/params.hpp"

namespace magneto::nn {

/// Adam with the usual defaults and bias correction. Moments mirror the
/// parameter store layout.
template <typename T>
class Adam {
public:
    Adam(const ParamStore<T>& params, double lr)
        : m_(params.like()), v_(params.like()), lr_(lr) {}

    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }
    long step_count() const { return step_; }

    // Throws TrainError on non-finite gradients (with the offending name).
    void step(ParamStore<T>& params, const ParamStore<T>& grads);

    ParamStore<T>& moments_m() { return m_; }
    ParamStore<T>& moments_v() { return v_; }
    void set_step_count(long s) { step_ = s; }

private:
    ParamStore<T> m_, v_;
    double lr_;
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    long step_ = 0;
};

template <typename T>
void ema_update(ParamStore<T>& ema, const ParamStore<T>& params, double decay = 0.999);

// Global L2-norm gradient clip; returns the pre-clip norm.
template <typename T>
double clip_grad_norm(ParamStore<T>& grads, double max_norm);

/// Multiplies the learning rate by `factor` whenever `patience` consecutive
/// epochs bring no improvement over the best seen validation loss. The
/// counter resets on improvement and on every reduction.
struct PlateauScheduler {
    double factor = 0.75;
    int patience = 10;
    double best_loss = 1e300;
    int epochs_since_improve = 0;

    // feeds one epoch's validation loss, returns the new learning rate
    double step(double val_loss, double current_lr) {
        if (val_loss < best_loss) {
            best_loss = val_loss;
            epochs_since_improve = 0;
            return current_lr;
        }
        if (++epochs_since_improve >= patience) {
            epochs_since_improve = 0;
            return current_lr * factor;
        }
        return current_lr;
    }
};

extern template class Adam<float>;
extern template class Adam<double>;

} // namespace magneto::nn
