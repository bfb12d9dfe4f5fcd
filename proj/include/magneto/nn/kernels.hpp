#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace magneto::nn {

/// 1-D convolution geometry. Layout is channels x time, row-major.
struct ConvSpec {
    int in_ch = 1;
    int out_ch = 1;
    int kernel = 5;
    int stride = 1;
    int dilation = 1;
    int pad = 2;

    std::size_t out_len(std::size_t in_len) const {
        const std::ptrdiff_t span = std::ptrdiff_t(dilation) * (kernel - 1) + 1;
        return std::size_t((std::ptrdiff_t(in_len) + 2 * pad - span) / stride + 1);
    }
    std::size_t weight_count() const {
        return std::size_t(out_ch) * std::size_t(in_ch) * std::size_t(kernel);
    }
    static ConvSpec same(int in_ch, int out_ch, int kernel, int dilation = 1) {
        return {in_ch, out_ch, kernel, 1, dilation, dilation * (kernel - 1) / 2};
    }
    static ConvSpec down2(int in_ch, int out_ch, int kernel) {
        return {in_ch, out_ch, kernel, 2, 1, kernel / 2};
    }
};

// y[co][t] = bias[co] + sum_{ci,k} w[co][ci][k] * x[ci][t*stride + k*dilation - pad]
// The parallel variant splits over output channels; outputs are written once
// so results are identical to the serial reference.
template <typename T>
void conv1d_forward(const ConvSpec& s, const T* w, const T* bias, const T* x,
                    std::size_t in_len, T* y, bool parallel = false);

// gx += W^T * gy (zero gx beforehand when accumulation is not wanted)
template <typename T>
void conv1d_backward_input(const ConvSpec& s, const T* w, const T* gy,
                           std::size_t in_len, T* gx, bool parallel = false);

// gw/gbias are accumulated.
template <typename T>
void conv1d_backward_params(const ConvSpec& s, const T* x, const T* gy,
                            std::size_t in_len, T* gw, T* gbias, bool parallel = false);

// Group normalization over groups of `group_size` channels, per call
// (one item): mean/var over (group_size x time) elements.
template <typename T>
struct GroupNormCache {
    std::vector<T> mean, inv_std; // per group
    std::vector<T> normalized;    // x_hat, kept for backward
};

template <typename T>
void group_norm_forward(int channels, int group_size, std::size_t len, const T* x,
                        const T* gamma, const T* beta, T* y, GroupNormCache<T>* cache);

template <typename T>
void group_norm_backward(int channels, int group_size, std::size_t len,
                         const GroupNormCache<T>& cache, const T* gamma, const T* gy,
                         T* gx, T* ggamma, T* gbeta);

template <typename T>
inline T silu(T x) {
    const T s = T(1) / (T(1) + std::exp(-x));
    return x * s;
}

template <typename T>
inline T silu_grad(T x) {
    const T s = T(1) / (T(1) + std::exp(-x));
    return s * (T(1) + x * (T(1) - s));
}

// Nearest-neighbour 2x upsample (and its adjoint) along time.
template <typename T>
void upsample2_forward(int channels, std::size_t in_len, const T* x, std::size_t out_len, T* y);
template <typename T>
void upsample2_backward(int channels, std::size_t in_len, T* gx, std::size_t out_len, const T* gy);

} // namespace magneto::nn
