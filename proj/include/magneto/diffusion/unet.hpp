#pragma once

#include "magneto/diffusion/schedule.hpp"
#include "magneto/nn/kernels.hpp"
#include "magneto/nn/params.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace magneto::diffusion {

/// Fully convolutional 1-D U-Net: stride-2 stage per entry of `channels`
/// (depth = channels.size()), residual GN/SiLU conv blocks, concat skips
/// merged with 1x1 convs, sinusoidal noise embedding with per-block affine
/// bias. The head conv starts at zero so an untrained net is F == 0.
struct UNetTopology {
    int in_channels = 1;
    std::vector<int> channels = {16, 24, 32, 48}; // width after each down stage
    int kernel = 5;
    int embed_dim = 32;
    std::vector<int> enc_blocks = {1, 1, 0};        // blocks at levels 1..depth-1
    int bottleneck_blocks = 2;
    std::vector<int> bottleneck_dilations = {4, 16}; // per bottleneck block
    int group_size = 8;

    // widths per level 0..depth (level 0 = stem, level depth = bottleneck;
    // the final down stage keeps the last width)
    std::vector<int> widths() const {
        std::vector<int> w = channels;
        w.push_back(channels.back());
        return w;
    }
    int depth() const { return int(channels.size()); }
    void validate() const;

    static UNetTopology hiss() { return {}; }
    static UNetTopology trajectory() {
        UNetTopology t;
        t.channels = {16, 24, 32};
        t.embed_dim = 16;
        t.enc_blocks = {1, 1};
        t.bottleneck_blocks = 3;
        t.bottleneck_dilations = {1, 2, 4};
        return t;
    }
};

template <typename T>
struct BlockCache {
    nn::GroupNormCache<T> gn1, gn2;
    std::vector<T> t1, t2, t5, t6;
};

template <typename T>
struct UNetWorkspace {
    std::vector<T> emb_feat, emb_pre, emb;
    std::vector<std::size_t> lens;            // time length per level
    std::vector<T> stem_in;                   // conditioned input (1 x T)
    std::vector<std::vector<T>> skips;        // per level 0..depth-1
    std::vector<std::vector<BlockCache<T>>> enc_caches; // per level
    std::vector<std::vector<T>> down_out;     // per down stage 1..depth (input to blocks)
    std::vector<BlockCache<T>> mid_caches;
    std::vector<T> bottom;                    // tensor entering the bottleneck
    std::vector<std::vector<T>> up_mid;       // upsampled tensor per decoder stage
    std::vector<std::vector<T>> cat;          // concat tensor per decoder stage
    std::vector<std::vector<T>> cur;          // decoder outputs per level
    nn::GroupNormCache<T> head_gn;
    std::vector<T> h1, h2;
};

template <typename T>
class UNet1D {
public:
    UNetTopology topo;
    nn::ParamStore<T> params;

    void build(const UNetTopology& topology, std::uint64_t seed);
    void bind() {} // params accessed by name; nothing cached

    std::size_t param_count() const { return params.total_values(); }

    // Raw network F(x; c_noise): 1 x len in, 1 x len out.
    void forward(const T* x, std::size_t len, double c_noise, T* out,
                 UNetWorkspace<T>* ws, bool parallel = false) const;

    // Parameter gradients only (diffusion training never needs input grads).
    void backward(const UNetWorkspace<T>& ws, const T* dout,
                  nn::ParamStore<T>& grads, bool parallel = false) const;

    std::size_t min_input_len() const { return std::size_t(1) << topo.depth(); }
};

// D(x; sigma) = c_skip x + c_out F(c_in x; c_noise). Throws on NaN output.
template <typename T>
void denoise(const UNet1D<T>& net, double sigma_data, const T* x_noisy, std::size_t len,
             double sigma, T* d_out, UNetWorkspace<T>* ws = nullptr, bool parallel = false);

std::size_t unet_param_count(const UNetTopology& topo);

extern template class UNet1D<float>;
extern template class UNet1D<double>;
extern template void denoise<float>(const UNet1D<float>&, double, const float*, std::size_t,
                                    double, float*, UNetWorkspace<float>*, bool);
extern template void denoise<double>(const UNet1D<double>&, double, const double*, std::size_t,
                                     double, double*, UNetWorkspace<double>*, bool);

} // namespace magneto::diffusion
