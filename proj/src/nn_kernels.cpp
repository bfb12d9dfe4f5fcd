#include "magneto/nn/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace magneto::nn {

template <typename T>
void conv1d_forward(const ConvSpec& s, const T* w, const T* bias, const T* x,
                    std::size_t in_len, T* y, bool parallel) {
    const std::ptrdiff_t n_in = std::ptrdiff_t(in_len);
    const std::ptrdiff_t n_out = std::ptrdiff_t(s.out_len(in_len));
    const std::ptrdiff_t kw = s.kernel;

#pragma omp parallel for schedule(static) if (parallel)
    for (int co = 0; co < s.out_ch; ++co) {
        T* yrow = y + std::size_t(co) * std::size_t(n_out);
        for (std::ptrdiff_t t = 0; t < n_out; ++t) yrow[t] = bias ? bias[co] : T(0);
        for (int ci = 0; ci < s.in_ch; ++ci) {
            const T* xrow = x + std::size_t(ci) * in_len;
            const T* wrow = w + (std::size_t(co) * std::size_t(s.in_ch) + std::size_t(ci)) *
                                    std::size_t(kw);
            for (int k = 0; k < kw; ++k) {
                const T wk = wrow[k];
                if (wk == T(0)) continue;
                const std::ptrdiff_t off = std::ptrdiff_t(k) * s.dilation - s.pad;
                // valid output range for this tap
                std::ptrdiff_t t0 = 0, t1 = n_out;
                if (off < 0) t0 = (-off + s.stride - 1) / s.stride;
                const std::ptrdiff_t max_src = n_in - 1 - off;
                if (max_src < 0) continue;
                t1 = std::min<std::ptrdiff_t>(t1, max_src / s.stride + 1);
                const T* src = xrow + off;
                for (std::ptrdiff_t t = t0; t < t1; ++t)
                    yrow[t] += wk * src[std::size_t(t) * std::size_t(s.stride)];
            }
        }
    }
}

template <typename T>
void conv1d_backward_input(const ConvSpec& s, const T* w, const T* gy,
                           std::size_t in_len, T* gx, bool parallel) {
    const std::ptrdiff_t n_in = std::ptrdiff_t(in_len);
    const std::ptrdiff_t n_out = std::ptrdiff_t(s.out_len(in_len));
    const std::ptrdiff_t kw = s.kernel;

#pragma omp parallel for schedule(static) if (parallel)
    for (int ci = 0; ci < s.in_ch; ++ci) {
        T* gxrow = gx + std::size_t(ci) * in_len;
        for (int co = 0; co < s.out_ch; ++co) {
            const T* gyrow = gy + std::size_t(co) * std::size_t(n_out);
            const T* wrow = w + (std::size_t(co) * std::size_t(s.in_ch) + std::size_t(ci)) *
                                    std::size_t(kw);
            for (int k = 0; k < kw; ++k) {
                const T wk = wrow[k];
                if (wk == T(0)) continue;
                const std::ptrdiff_t off = std::ptrdiff_t(k) * s.dilation - s.pad;
                std::ptrdiff_t t0 = 0, t1 = n_out;
                if (off < 0) t0 = (-off + s.stride - 1) / s.stride;
                const std::ptrdiff_t max_src = n_in - 1 - off;
                if (max_src < 0) continue;
                t1 = std::min<std::ptrdiff_t>(t1, max_src / s.stride + 1);
                for (std::ptrdiff_t t = t0; t < t1; ++t)
                    gxrow[std::size_t(t) * std::size_t(s.stride) + std::size_t(off)] +=
                        wk * gyrow[t];
            }
        }
    }
}

template <typename T>
void conv1d_backward_params(const ConvSpec& s, const T* x, const T* gy,
                            std::size_t in_len, T* gw, T* gbias, bool parallel) {
    const std::ptrdiff_t n_in = std::ptrdiff_t(in_len);
    const std::ptrdiff_t n_out = std::ptrdiff_t(s.out_len(in_len));
    const std::ptrdiff_t kw = s.kernel;

#pragma omp parallel for schedule(static) if (parallel)
    for (int co = 0; co < s.out_ch; ++co) {
        const T* gyrow = gy + std::size_t(co) * std::size_t(n_out);
        if (gbias) {
            T acc = T(0);
            for (std::ptrdiff_t t = 0; t < n_out; ++t) acc += gyrow[t];
            gbias[co] += acc;
        }
        for (int ci = 0; ci < s.in_ch; ++ci) {
            const T* xrow = x + std::size_t(ci) * in_len;
            T* gwrow = gw + (std::size_t(co) * std::size_t(s.in_ch) + std::size_t(ci)) *
                               std::size_t(kw);
            for (int k = 0; k < kw; ++k) {
                const std::ptrdiff_t off = std::ptrdiff_t(k) * s.dilation - s.pad;
                std::ptrdiff_t t0 = 0, t1 = n_out;
                if (off < 0) t0 = (-off + s.stride - 1) / s.stride;
                const std::ptrdiff_t max_src = n_in - 1 - off;
                if (max_src < 0) continue;
                t1 = std::min<std::ptrdiff_t>(t1, max_src / s.stride + 1);
                T acc = T(0);
                const T* src = xrow + off;
                for (std::ptrdiff_t t = t0; t < t1; ++t)
                    acc += gyrow[t] * src[std::size_t(t) * std::size_t(s.stride)];
                gwrow[k] += acc;
            }
        }
    }
}

template <typename T>
void group_norm_forward(int channels, int group_size, std::size_t len, const T* x,
                        const T* gamma, const T* beta, T* y, GroupNormCache<T>* cache) {
    const int groups = channels / group_size;
    const T eps = T(1e-5);
    if (cache) {
        cache->mean.assign(std::size_t(groups), T(0));
        cache->inv_std.assign(std::size_t(groups), T(0));
        cache->normalized.assign(std::size_t(channels) * len, T(0));
    }
    for (int g = 0; g < groups; ++g) {
        const std::size_t base = std::size_t(g) * std::size_t(group_size) * len;
        const std::size_t count = std::size_t(group_size) * len;
        T mean = T(0);
        for (std::size_t i = 0; i < count; ++i) mean += x[base + i];
        mean /= T(count);
        T var = T(0);
        for (std::size_t i = 0; i < count; ++i) {
            const T d = x[base + i] - mean;
            var += d * d;
        }
        var /= T(count);
        const T inv_std = T(1) / std::sqrt(var + eps);
        if (cache) {
            cache->mean[std::size_t(g)] = mean;
            cache->inv_std[std::size_t(g)] = inv_std;
        }
        for (int cc = 0; cc < group_size; ++cc) {
            const int c = g * group_size + cc;
            const std::size_t row = std::size_t(c) * len;
            for (std::size_t t = 0; t < len; ++t) {
                const T xhat = (x[row + t] - mean) * inv_std;
                if (cache) cache->normalized[row + t] = xhat;
                y[row + t] = gamma[c] * xhat + beta[c];
            }
        }
    }
}

template <typename T>
void group_norm_backward(int channels, int group_size, std::size_t len,
                         const GroupNormCache<T>& cache, const T* gamma, const T* gy,
                         T* gx, T* ggamma, T* gbeta) {
    const int groups = channels / group_size;
    for (int g = 0; g < groups; ++g) {
        const std::size_t count = std::size_t(group_size) * len;
        const T inv_std = cache.inv_std[std::size_t(g)];

        // per-channel param grads plus the two group reductions
        T sum_gyg = T(0);      // sum of gamma_c * gy
        T sum_gyg_xhat = T(0); // sum of gamma_c * gy * xhat
        for (int cc = 0; cc < group_size; ++cc) {
            const int c = g * group_size + cc;
            const std::size_t row = std::size_t(c) * len;
            T gsum = T(0), bsum = T(0);
            for (std::size_t t = 0; t < len; ++t) {
                const T gyv = gy[row + t];
                const T xhat = cache.normalized[row + t];
                gsum += gyv * xhat;
                bsum += gyv;
                sum_gyg += gamma[c] * gyv;
                sum_gyg_xhat += gamma[c] * gyv * xhat;
            }
            ggamma[c] += gsum;
            gbeta[c] += bsum;
        }
        const T inv_count = T(1) / T(count);
        for (int cc = 0; cc < group_size; ++cc) {
            const int c = g * group_size + cc;
            const std::size_t row = std::size_t(c) * len;
            for (std::size_t t = 0; t < len; ++t) {
                const T xhat = cache.normalized[row + t];
                const T term = gamma[c] * gy[row + t] -
                               inv_count * (sum_gyg + xhat * sum_gyg_xhat);
                gx[row + t] += inv_std * term;
            }
        }
    }
}

template <typename T>
void upsample2_forward(int channels, std::size_t in_len, const T* x, std::size_t out_len, T* y) {
    for (int c = 0; c < channels; ++c) {
        const T* xrow = x + std::size_t(c) * in_len;
        T* yrow = y + std::size_t(c) * out_len;
        for (std::size_t t = 0; t < out_len; ++t) yrow[t] = xrow[std::min(t / 2, in_len - 1)];
    }
}

template <typename T>
void upsample2_backward(int channels, std::size_t in_len, T* gx, std::size_t out_len, const T* gy) {
    for (int c = 0; c < channels; ++c) {
        T* gxrow = gx + std::size_t(c) * in_len;
        const T* gyrow = gy + std::size_t(c) * out_len;
        for (std::size_t t = 0; t < out_len; ++t) gxrow[std::min(t / 2, in_len - 1)] += gyrow[t];
    }
}

template void conv1d_forward<float>(const ConvSpec&, const float*, const float*, const float*, std::size_t, float*, bool);
template void conv1d_forward<double>(const ConvSpec&, const double*, const double*, const double*, std::size_t, double*, bool);
template void conv1d_backward_input<float>(const ConvSpec&, const float*, const float*, std::size_t, float*, bool);
template void conv1d_backward_input<double>(const ConvSpec&, const double*, const double*, std::size_t, double*, bool);
template void conv1d_backward_params<float>(const ConvSpec&, const float*, const float*, std::size_t, float*, float*, bool);
template void conv1d_backward_params<double>(const ConvSpec&, const double*, const double*, std::size_t, double*, double*, bool);
template void group_norm_forward<float>(int, int, std::size_t, const float*, const float*, const float*, float*, GroupNormCache<float>*);
template void group_norm_forward<double>(int, int, std::size_t, const double*, const double*, const double*, double*, GroupNormCache<double>*);
template void group_norm_backward<float>(int, int, std::size_t, const GroupNormCache<float>&, const float*, const float*, float*, float*, float*);
template void group_norm_backward<double>(int, int, std::size_t, const GroupNormCache<double>&, const double*, const double*, double*, double*, double*);
template void upsample2_forward<float>(int, std::size_t, const float*, std::size_t, float*);
template void upsample2_forward<double>(int, std::size_t, const double*, std::size_t, double*);
template void upsample2_backward<float>(int, std::size_t, float*, std::size_t, const float*);
template void upsample2_backward<double>(int, std::size_t, double*, std::size_t, const double*);

} // namespace magneto::nn
