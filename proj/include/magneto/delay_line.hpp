#pragma once

#include "magneto/errors.hpp"
#include "magneto/trajectory.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace magneto {

// Interpolation weights for a fractional delay of d samples with a line of
// capacity N: w[i] = max(0, 1 - |N - i - d|), i = 0..N. The buffer is laid
// out oldest-first, so buffer[i] holds x[n - (N - i)] and sum_i w[i]*buffer[i]
// equals x[n - d]. At most two adjacent weights are nonzero and they sum to 1.
template <typename T>
std::vector<T> delay_weights(T d, int capacity) {
    if (!(d >= T(0)) || d > T(capacity))
        throw ConfigError("delay_weights: delay outside [0, capacity]");
    std::vector<T> w(std::size_t(capacity) + 1, T(0));
    for (int i = 0; i <= capacity; ++i) {
        const T z = T(capacity - i) - d;
        const T v = T(1) - (z < T(0) ? -z : z);
        if (v > T(0)) w[std::size_t(i)] = v;
    }
    return w;
}

// Two-tap view of the same weights: y[n] = w_lo*x[n-k_lo] + w_hi*x[n-k_lo-1].
// grad_lo/grad_hi are d(w)/d(delay) under the left-limit convention at
// integer delays (right-limit at d = 0, where no left neighbour exists).
template <typename T>
struct DelayTaps {
    int k_lo;
    T w_lo, w_hi;
    T grad_lo, grad_hi;
};

template <typename T>
DelayTaps<T> delay_taps(T d) {
    DelayTaps<T> t;
    T fl = std::floor(d);
    T frac = d - fl;
    if (frac == T(0) && d > T(0)) { // left limit: treat as frac -> 1 from below
        fl -= T(1);
        frac = T(1);
    }
    t.k_lo = int(fl);
    t.w_lo = T(1) - frac;
    t.w_hi = frac;
    t.grad_lo = T(-1);
    t.grad_hi = T(1);
    return t;
}

/// Streaming time-varying fractional delay line (single owner).
class DelayLine {
public:
    explicit DelayLine(int capacity)
        : capacity_(capacity), buffer_(std::size_t(capacity) + 1, 0.0f) {
        if (capacity < 1) throw ConfigError("DelayLine: capacity must be >= 1");
    }

    int capacity() const { return capacity_; }

    float process(float x, double d) {
        if (d < 0.0 || d > double(capacity_))
            throw ConfigError("DelayLine: delay exceeds capacity");
        buffer_[head_] = x;
        const auto taps = delay_taps(d);
        const float lo = at_delay(taps.k_lo);
        const float hi = at_delay(taps.k_lo + 1);
        head_ = (head_ + 1) % buffer_.size();
        return float(taps.w_lo) * lo + float(taps.w_hi) * hi;
    }

    void reset() {
        std::fill(buffer_.begin(), buffer_.end(), 0.0f);
        head_ = 0;
    }

private:
    float at_delay(int k) const {
        // head_ currently points at x[n]
        std::size_t idx = (head_ + buffer_.size() - std::size_t(k)) % buffer_.size();
        return buffer_[idx];
    }

    int capacity_;
    std::vector<float> buffer_;
    std::size_t head_ = 0;
};

// y[n] = x[n - delay[n]] with linear interpolation, zero history before the
// first sample. delay.size() must equal x.size().
std::vector<float> apply_time_varying_delay(const std::vector<float>& x,
                                            const std::vector<double>& delay);

// Naive full-weight-vector evaluation of the same operation; kept as the
// reference for tests.
std::vector<float> apply_time_varying_delay_reference(const std::vector<float>& x,
                                                      const std::vector<double>& delay,
                                                      int capacity);

// Inverts y[n] = x[n - tau[n]]: interprets (n - tau[n], y[n]) as nonuniform
// samples of x and linearly interpolates onto the uniform grid. Samples with
// no bracketing pair are zero. Throws if warped time decreases.
std::vector<float> demodulate(const std::vector<float>& y,
                              const std::vector<double>& tau);

} // namespace magneto
