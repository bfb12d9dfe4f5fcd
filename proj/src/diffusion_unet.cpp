#include "magneto/diffusion/unet.hpp"
#include "magneto/errors.hpp"

#include <cmath>
#include <cstdio>

namespace magneto::diffusion {

using nn::ConvSpec;

void UNetTopology::validate() const {
    if (channels.empty()) throw ConfigError("unet: channels must not be empty");
    if (int(enc_blocks.size()) != depth() - 1)
        throw ConfigError("unet: enc_blocks must have depth-1 entries");
    if (int(bottleneck_dilations.size()) != bottleneck_blocks)
        throw ConfigError("unet: one dilation per bottleneck block");
    if (embed_dim < 2 || embed_dim % 2 != 0)
        throw ConfigError("unet: embed_dim must be even and >= 2");
    for (int c : channels)
        if (c % group_size != 0)
            throw ConfigError("unet: channel widths must be divisible by the group size");
}

namespace {

std::string block_name(const std::string& prefix, int j) {
    return prefix + ".b" + std::to_string(j);
}

template <typename T>
void declare_block(nn::ParamStore<T>& store, const std::string& name, int ch, int kernel,
                   int embed_dim) {
    const std::size_t c = std::size_t(ch);
    store.add(name + ".gn1.g", {c});
    store.add(name + ".gn1.b", {c});
    store.add(name + ".c1.w", {c, c, std::size_t(kernel)});
    store.add(name + ".c1.b", {c});
    store.add(name + ".emb.w", {c, std::size_t(embed_dim)});
    store.add(name + ".emb.b", {c});
    store.add(name + ".gn2.g", {c});
    store.add(name + ".gn2.b", {c});
    store.add(name + ".c2.w", {c, c, std::size_t(kernel)});
    store.add(name + ".c2.b", {c});
}

template <typename T>
void init_block(nn::ParamStore<T>& store, const std::string& name, int ch, int kernel,
                int embed_dim, Rng& rng) {
    std::fill(store.at(name + ".gn1.g").begin(), store.at(name + ".gn1.g").end(), T(1));
    std::fill(store.at(name + ".gn2.g").begin(), store.at(name + ".gn2.g").end(), T(1));
    const double conv_bound = std::sqrt(6.0 / double(ch * kernel));
    nn::uniform_init(store.at(name + ".c1.w"), conv_bound, rng);
    nn::uniform_init(store.at(name + ".c2.w"), conv_bound, rng);
    const double emb_bound = 1.0 / std::sqrt(double(embed_dim));
    nn::uniform_init(store.at(name + ".emb.w"), emb_bound, rng);
}

} // namespace

template <typename T>
void UNet1D<T>::build(const UNetTopology& topology, std::uint64_t seed) {
    topology.validate();
    topo = topology;
    params = nn::ParamStore<T>();
    const auto w = topo.widths();
    const int L = topo.depth();
    const int k = topo.kernel;
    const int E = topo.embed_dim;

    params.add("stem.w", {std::size_t(w[0]), std::size_t(topo.in_channels), std::size_t(k)});
    params.add("stem.b", {std::size_t(w[0])});
    params.add("emb.w", {std::size_t(E), std::size_t(E)});
    params.add("emb.b", {std::size_t(E)});

    for (int i = 1; i <= L; ++i) {
        const std::string d = "down" + std::to_string(i);
        params.add(d + ".w", {std::size_t(w[std::size_t(i)]), std::size_t(w[std::size_t(i) - 1]),
                              std::size_t(k)});
        params.add(d + ".b", {std::size_t(w[std::size_t(i)])});
        if (i < L)
            for (int j = 0; j < topo.enc_blocks[std::size_t(i) - 1]; ++j)
                declare_block(params, block_name("enc" + std::to_string(i), j),
                              w[std::size_t(i)], k, E);
    }
    for (int j = 0; j < topo.bottleneck_blocks; ++j)
        declare_block(params, block_name("mid", j), w[std::size_t(L)], k, E);

    for (int j = L - 1; j >= 0; --j) {
        const std::string u = "up" + std::to_string(j);
        params.add(u + ".w", {std::size_t(w[std::size_t(j)]), std::size_t(w[std::size_t(j) + 1]),
                              std::size_t(k)});
        params.add(u + ".b", {std::size_t(w[std::size_t(j)])});
        const std::string m = "merge" + std::to_string(j);
        params.add(m + ".w", {std::size_t(w[std::size_t(j)]), std::size_t(2 * w[std::size_t(j)]), 1});
        params.add(m + ".b", {std::size_t(w[std::size_t(j)])});
    }
    params.add("head.gn.g", {std::size_t(w[0])});
    params.add("head.gn.b", {std::size_t(w[0])});
    params.add("head.w", {std::size_t(topo.in_channels), std::size_t(w[0]), std::size_t(k)});
    params.add("head.b", {std::size_t(topo.in_channels)});

    Rng rng(derive_seed(seed, 0x756e, 0));
    nn::uniform_init(params.at("stem.w"), std::sqrt(6.0 / double(topo.in_channels * k)), rng);
    nn::uniform_init(params.at("emb.w"), 1.0 / std::sqrt(double(E)), rng);
    for (int i = 1; i <= L; ++i) {
        const std::string d = "down" + std::to_string(i);
        nn::uniform_init(params.at(d + ".w"),
                         std::sqrt(6.0 / double(w[std::size_t(i) - 1] * k)), rng);
        if (i < L)
            for (int j = 0; j < topo.enc_blocks[std::size_t(i) - 1]; ++j)
                init_block(params, block_name("enc" + std::to_string(i), j), w[std::size_t(i)],
                           k, E, rng);
    }
    for (int j = 0; j < topo.bottleneck_blocks; ++j)
        init_block(params, block_name("mid", j), w[std::size_t(L)], k, E, rng);
    for (int j = L - 1; j >= 0; --j) {
        nn::uniform_init(params.at("up" + std::to_string(j) + ".w"),
                         std::sqrt(6.0 / double(w[std::size_t(j) + 1] * k)), rng);
        nn::uniform_init(params.at("merge" + std::to_string(j) + ".w"),
                         std::sqrt(6.0 / double(2 * w[std::size_t(j)])), rng);
    }
    std::fill(params.at("head.gn.g").begin(), params.at("head.gn.g").end(), T(1));
    // head conv stays zero so F == 0 before training
}

namespace {

// forward through one residual block; x is updated in place
template <typename T>
void block_forward(const nn::ParamStore<T>& params, const std::string& name, int ch,
                   int kernel, int dilation, int group_size, const std::vector<T>& emb,
                   std::vector<T>& x, std::size_t len, BlockCache<T>* cache, bool parallel) {
    const ConvSpec spec = ConvSpec::same(ch, ch, kernel, dilation);
    BlockCache<T> local;
    BlockCache<T>& c = cache ? *cache : local;

    c.t1.assign(x.size(), T(0));
    nn::group_norm_forward(ch, group_size, len, x.data(), params.at(name + ".gn1.g").data(),
                           params.at(name + ".gn1.b").data(), c.t1.data(), &c.gn1);
    c.t2.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c.t2[i] = nn::silu(c.t1[i]);

    std::vector<T> t4(x.size());
    nn::conv1d_forward(spec, params.at(name + ".c1.w").data(), params.at(name + ".c1.b").data(),
                       c.t2.data(), len, t4.data(), parallel);
    const auto& ew = params.at(name + ".emb.w");
    const auto& eb = params.at(name + ".emb.b");
    const std::size_t E = emb.size();
    for (int cc = 0; cc < ch; ++cc) {
        T bias = eb[std::size_t(cc)];
        for (std::size_t e = 0; e < E; ++e) bias += ew[std::size_t(cc) * E + e] * emb[e];
        T* row = t4.data() + std::size_t(cc) * len;
        for (std::size_t t = 0; t < len; ++t) row[t] += bias;
    }

    c.t5.assign(x.size(), T(0));
    nn::group_norm_forward(ch, group_size, len, t4.data(), params.at(name + ".gn2.g").data(),
                           params.at(name + ".gn2.b").data(), c.t5.data(), &c.gn2);
    c.t6.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c.t6[i] = nn::silu(c.t5[i]);

    std::vector<T> t7(x.size());
    nn::conv1d_forward(spec, params.at(name + ".c2.w").data(), params.at(name + ".c2.b").data(),
                       c.t6.data(), len, t7.data(), parallel);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += t7[i];
}

// backward through one residual block: dx (gradient w.r.t. block output) is
// transformed into the gradient w.r.t. the block input, in place.
template <typename T>
void block_backward(const nn::ParamStore<T>& params, nn::ParamStore<T>& grads,
                    const std::string& name, int ch, int kernel, int dilation, int group_size,
                    const std::vector<T>& emb, std::vector<T>& demb, const BlockCache<T>& c,
                    std::vector<T>& dx, std::size_t len, bool parallel) {
    const ConvSpec spec = ConvSpec::same(ch, ch, kernel, dilation);
    const std::size_t n = dx.size();

    // conv2
    std::vector<T> dt6(n, T(0));
    nn::conv1d_backward_params(spec, c.t6.data(), dx.data(), len,
                               grads.at(name + ".c2.w").data(),
                               grads.at(name + ".c2.b").data(), parallel);
    nn::conv1d_backward_input(spec, params.at(name + ".c2.w").data(), dx.data(), len,
                              dt6.data(), parallel);
    for (std::size_t i = 0; i < n; ++i) dt6[i] *= nn::silu_grad(c.t5[i]);

    std::vector<T> dt4(n, T(0));
    nn::group_norm_backward(ch, group_size, len, c.gn2, params.at(name + ".gn2.g").data(),
                            dt6.data(), dt4.data(), grads.at(name + ".gn2.g").data(),
                            grads.at(name + ".gn2.b").data());

    // embedding bias
    const auto& ew = params.at(name + ".emb.w");
    auto& gew = grads.at(name + ".emb.w");
    auto& geb = grads.at(name + ".emb.b");
    const std::size_t E = emb.size();
    for (int cc = 0; cc < ch; ++cc) {
        T dbias = T(0);
        const T* row = dt4.data() + std::size_t(cc) * len;
        for (std::size_t t = 0; t < len; ++t) dbias += row[t];
        geb[std::size_t(cc)] += dbias;
        for (std::size_t e = 0; e < E; ++e) {
            gew[std::size_t(cc) * E + e] += dbias * emb[e];
            demb[e] += ew[std::size_t(cc) * E + e] * dbias;
        }
    }

    // conv1
    std::vector<T> dt2(n, T(0));
    nn::conv1d_backward_params(spec, c.t2.data(), dt4.data(), len,
                               grads.at(name + ".c1.w").data(),
                               grads.at(name + ".c1.b").data(), parallel);
    nn::conv1d_backward_input(spec, params.at(name + ".c1.w").data(), dt4.data(), len,
                              dt2.data(), parallel);
    for (std::size_t i = 0; i < n; ++i) dt2[i] *= nn::silu_grad(c.t1[i]);

    std::vector<T> dgn1(n, T(0));
    nn::group_norm_backward(ch, group_size, len, c.gn1, params.at(name + ".gn1.g").data(),
                            dt2.data(), dgn1.data(), grads.at(name + ".gn1.g").data(),
                            grads.at(name + ".gn1.b").data());
    for (std::size_t i = 0; i < n; ++i) dx[i] += dgn1[i]; // residual path
}

} // namespace

template <typename T>
void UNet1D<T>::forward(const T* x, std::size_t len, double c_noise, T* out,
                        UNetWorkspace<T>* ws, bool parallel) const {
    if (len < min_input_len()) throw ConfigError("unet: input too short for the depth");
    const auto w = topo.widths();
    const int L = topo.depth();
    const int k = topo.kernel;
    const int E = topo.embed_dim;
    const int gs = topo.group_size;

    UNetWorkspace<T> local;
    UNetWorkspace<T>& W = ws ? *ws : local;

    // sinusoidal features of c_noise, then a small shared projection
    W.emb_feat.resize(std::size_t(E));
    for (int i = 0; i < E / 2; ++i) {
        const double f = std::ldexp(1.0, i); // 2^i
        W.emb_feat[std::size_t(2 * i)] = T(std::sin(f * c_noise));
        W.emb_feat[std::size_t(2 * i + 1)] = T(std::cos(f * c_noise));
    }
    W.emb_pre.assign(std::size_t(E), T(0));
    const auto& emw = params.at("emb.w");
    const auto& emb_b = params.at("emb.b");
    for (int i = 0; i < E; ++i) {
        T acc = emb_b[std::size_t(i)];
        for (int j = 0; j < E; ++j)
            acc += emw[std::size_t(i) * std::size_t(E) + std::size_t(j)] * W.emb_feat[std::size_t(j)];
        W.emb_pre[std::size_t(i)] = acc;
    }
    W.emb.resize(std::size_t(E));
    for (int i = 0; i < E; ++i) W.emb[std::size_t(i)] = nn::silu(W.emb_pre[std::size_t(i)]);

    W.lens.assign(std::size_t(L) + 1, 0);
    W.lens[0] = len;
    W.skips.assign(std::size_t(L), {});
    W.enc_caches.assign(std::size_t(L), {});
    W.down_out.assign(std::size_t(L) + 1, {});

    W.stem_in.assign(x, x + len);
    W.skips[0].assign(std::size_t(w[0]) * len, T(0));
    nn::conv1d_forward(ConvSpec::same(topo.in_channels, w[0], k), params.at("stem.w").data(),
                       params.at("stem.b").data(), x, len, W.skips[0].data(), parallel);

    for (int i = 1; i <= L; ++i) {
        const ConvSpec dspec = ConvSpec::down2(w[std::size_t(i) - 1], w[std::size_t(i)], k);
        const std::size_t out_len = dspec.out_len(W.lens[std::size_t(i) - 1]);
        W.lens[std::size_t(i)] = out_len;
        auto& dst = W.down_out[std::size_t(i)];
        dst.assign(std::size_t(w[std::size_t(i)]) * out_len, T(0));
        nn::conv1d_forward(dspec, params.at("down" + std::to_string(i) + ".w").data(),
                           params.at("down" + std::to_string(i) + ".b").data(),
                           W.skips[std::size_t(i) - 1].data(), W.lens[std::size_t(i) - 1],
                           dst.data(), parallel);
        if (i < L) {
            std::vector<T> cur = dst;
            const int blocks = topo.enc_blocks[std::size_t(i) - 1];
            W.enc_caches[std::size_t(i)].resize(std::size_t(blocks));
            for (int j = 0; j < blocks; ++j)
                block_forward(params, block_name("enc" + std::to_string(i), j), w[std::size_t(i)],
                              k, 1, gs, W.emb, cur, out_len,
                              &W.enc_caches[std::size_t(i)][std::size_t(j)], parallel);
            W.skips[std::size_t(i)] = std::move(cur);
        }
    }

    W.bottom = W.down_out[std::size_t(L)];
    W.mid_caches.resize(std::size_t(topo.bottleneck_blocks));
    for (int j = 0; j < topo.bottleneck_blocks; ++j)
        block_forward(params, block_name("mid", j), w[std::size_t(L)], k,
                      topo.bottleneck_dilations[std::size_t(j)], gs, W.emb, W.bottom,
                      W.lens[std::size_t(L)], &W.mid_caches[std::size_t(j)], parallel);

    W.up_mid.assign(std::size_t(L), {});
    W.cat.assign(std::size_t(L), {});
    W.cur.assign(std::size_t(L), {});
    const std::vector<T>* cur = &W.bottom;
    for (int j = L - 1; j >= 0; --j) {
        const std::size_t hi_len = W.lens[std::size_t(j) + 1];
        const std::size_t lo_len = W.lens[std::size_t(j)];
        auto& mid = W.up_mid[std::size_t(j)];
        mid.assign(std::size_t(w[std::size_t(j) + 1]) * lo_len, T(0));
        nn::upsample2_forward(w[std::size_t(j) + 1], hi_len, cur->data(), lo_len, mid.data());

        std::vector<T> up_out(std::size_t(w[std::size_t(j)]) * lo_len, T(0));
        nn::conv1d_forward(ConvSpec::same(w[std::size_t(j) + 1], w[std::size_t(j)], k),
                           params.at("up" + std::to_string(j) + ".w").data(),
                           params.at("up" + std::to_string(j) + ".b").data(), mid.data(), lo_len,
                           up_out.data(), parallel);

        auto& cat = W.cat[std::size_t(j)];
        cat.resize(2 * std::size_t(w[std::size_t(j)]) * lo_len);
        std::copy(up_out.begin(), up_out.end(), cat.begin());
        std::copy(W.skips[std::size_t(j)].begin(), W.skips[std::size_t(j)].end(),
                  cat.begin() + std::ptrdiff_t(up_out.size()));

        auto& merged = W.cur[std::size_t(j)];
        merged.assign(std::size_t(w[std::size_t(j)]) * lo_len, T(0));
        const ConvSpec mspec{2 * w[std::size_t(j)], w[std::size_t(j)], 1, 1, 1, 0};
        nn::conv1d_forward(mspec, params.at("merge" + std::to_string(j) + ".w").data(),
                           params.at("merge" + std::to_string(j) + ".b").data(), cat.data(),
                           lo_len, merged.data(), parallel);
        cur = &merged;
    }

    // head
    W.h1.assign(std::size_t(w[0]) * len, T(0));
    nn::group_norm_forward(w[0], gs, len, W.cur[0].data(), params.at("head.gn.g").data(),
                           params.at("head.gn.b").data(), W.h1.data(), &W.head_gn);
    W.h2.resize(W.h1.size());
    for (std::size_t i = 0; i < W.h1.size(); ++i) W.h2[i] = nn::silu(W.h1[i]);
    nn::conv1d_forward(ConvSpec::same(w[0], topo.in_channels, k), params.at("head.w").data(),
                       params.at("head.b").data(), W.h2.data(), len, out, parallel);
}

template <typename T>
void UNet1D<T>::backward(const UNetWorkspace<T>& W, const T* dout,
                         nn::ParamStore<T>& grads, bool parallel) const {
    const auto w = topo.widths();
    const int L = topo.depth();
    const int k = topo.kernel;
    const int E = topo.embed_dim;
    const int gs = topo.group_size;
    const std::size_t len = W.lens[0];

    std::vector<T> demb(std::size_t(E), T(0));

    // head
    std::vector<T> dh2(W.h2.size(), T(0));
    nn::conv1d_backward_params(ConvSpec::same(w[0], topo.in_channels, k), W.h2.data(), dout,
                               len, grads.at("head.w").data(), grads.at("head.b").data(),
                               parallel);
    nn::conv1d_backward_input(ConvSpec::same(w[0], topo.in_channels, k),
                              params.at("head.w").data(), dout, len, dh2.data(), parallel);
    for (std::size_t i = 0; i < dh2.size(); ++i) dh2[i] *= nn::silu_grad(W.h1[i]);
    std::vector<T> dcur(W.cur[0].size(), T(0));
    nn::group_norm_backward(w[0], gs, len, W.head_gn, params.at("head.gn.g").data(), dh2.data(),
                            dcur.data(), grads.at("head.gn.g").data(),
                            grads.at("head.gn.b").data());

    // decoder stages in reverse execution order (j = 0 .. L-1)
    std::vector<std::vector<T>> dskips(std::size_t(L));
    for (int j = 0; j < L; ++j) {
        const std::size_t lo_len = W.lens[std::size_t(j)];
        const std::size_t hi_len = W.lens[std::size_t(j) + 1];

        const ConvSpec mspec{2 * w[std::size_t(j)], w[std::size_t(j)], 1, 1, 1, 0};
        std::vector<T> dcat(W.cat[std::size_t(j)].size(), T(0));
        nn::conv1d_backward_params(mspec, W.cat[std::size_t(j)].data(), dcur.data(), lo_len,
                                   grads.at("merge" + std::to_string(j) + ".w").data(),
                                   grads.at("merge" + std::to_string(j) + ".b").data(), parallel);
        nn::conv1d_backward_input(mspec, params.at("merge" + std::to_string(j) + ".w").data(),
                                  dcur.data(), lo_len, dcat.data(), parallel);

        const std::size_t half = std::size_t(w[std::size_t(j)]) * lo_len;
        std::vector<T> dup_out(dcat.begin(), dcat.begin() + std::ptrdiff_t(half));
        dskips[std::size_t(j)].assign(dcat.begin() + std::ptrdiff_t(half), dcat.end());

        std::vector<T> dmid(W.up_mid[std::size_t(j)].size(), T(0));
        nn::conv1d_backward_params(ConvSpec::same(w[std::size_t(j) + 1], w[std::size_t(j)], k),
                                   W.up_mid[std::size_t(j)].data(), dup_out.data(), lo_len,
                                   grads.at("up" + std::to_string(j) + ".w").data(),
                                   grads.at("up" + std::to_string(j) + ".b").data(), parallel);
        nn::conv1d_backward_input(ConvSpec::same(w[std::size_t(j) + 1], w[std::size_t(j)], k),
                                  params.at("up" + std::to_string(j) + ".w").data(),
                                  dup_out.data(), lo_len, dmid.data(), parallel);

        std::vector<T> dnext(std::size_t(w[std::size_t(j) + 1]) * hi_len, T(0));
        nn::upsample2_backward(w[std::size_t(j) + 1], hi_len, dnext.data(), lo_len, dmid.data());
        dcur = std::move(dnext);
    }

    // bottleneck
    for (int j = topo.bottleneck_blocks - 1; j >= 0; --j)
        block_backward(params, grads, block_name("mid", j), w[std::size_t(L)], k,
                       topo.bottleneck_dilations[std::size_t(j)], gs, W.emb, demb,
                       W.mid_caches[std::size_t(j)], dcur, W.lens[std::size_t(L)], parallel);

    // encoder levels L..1; dcur enters each level as the combined gradient
    // at that level's skip tensor (merge path already accumulated below)
    for (int i = L; i >= 1; --i) {
        if (i < L) {
            const int blocks = topo.enc_blocks[std::size_t(i) - 1];
            for (int j = blocks - 1; j >= 0; --j)
                block_backward(params, grads, block_name("enc" + std::to_string(i), j),
                               w[std::size_t(i)], k, 1, gs, W.emb, demb,
                               W.enc_caches[std::size_t(i)][std::size_t(j)], dcur,
                               W.lens[std::size_t(i)], parallel);
        }
        // dcur now holds the gradient at down_i's output
        const ConvSpec dspec = ConvSpec::down2(w[std::size_t(i) - 1], w[std::size_t(i)], k);
        nn::conv1d_backward_params(dspec, W.skips[std::size_t(i) - 1].data(), dcur.data(),
                                   W.lens[std::size_t(i) - 1],
                                   grads.at("down" + std::to_string(i) + ".w").data(),
                                   grads.at("down" + std::to_string(i) + ".b").data(), parallel);
        std::vector<T> dprev(W.skips[std::size_t(i) - 1].size(), T(0));
        nn::conv1d_backward_input(dspec, params.at("down" + std::to_string(i) + ".w").data(),
                                  dcur.data(), W.lens[std::size_t(i) - 1], dprev.data(),
                                  parallel);
        for (std::size_t q = 0; q < dprev.size(); ++q)
            dprev[q] += dskips[std::size_t(i) - 1][q];
        dcur = std::move(dprev);
    }

    // stem
    nn::conv1d_backward_params(ConvSpec::same(topo.in_channels, w[0], k), W.stem_in.data(),
                               dcur.data(), len, grads.at("stem.w").data(),
                               grads.at("stem.b").data(), parallel);

    // embedding projection
    auto& gemw = grads.at("emb.w");
    auto& gemb = grads.at("emb.b");
    for (int i = 0; i < E; ++i) {
        const T d = demb[std::size_t(i)] * nn::silu_grad(W.emb_pre[std::size_t(i)]);
        gemb[std::size_t(i)] += d;
        for (int j = 0; j < E; ++j)
            gemw[std::size_t(i) * std::size_t(E) + std::size_t(j)] +=
                d * W.emb_feat[std::size_t(j)];
    }
}

template <typename T>
void denoise(const UNet1D<T>& net, double sigma_data, const T* x_noisy, std::size_t len,
             double sigma, T* d_out, UNetWorkspace<T>* ws, bool parallel) {
    const Precond pc = precondition(sigma, sigma_data);
    std::vector<T> scaled(len);
    for (std::size_t i = 0; i < len; ++i) scaled[i] = T(pc.c_in) * x_noisy[i];
    std::vector<T> f(len);
    net.forward(scaled.data(), len, pc.c_noise, f.data(), ws, parallel);
    for (std::size_t i = 0; i < len; ++i) {
        d_out[i] = T(pc.c_skip) * x_noisy[i] + T(pc.c_out) * f[i];
        if (!std::isfinite(double(d_out[i]))) throw TrainError("denoise: non-finite output");
    }
}

std::size_t unet_param_count(const UNetTopology& topo) {
    UNet1D<float> net;
    net.build(topo, 0);
    return net.param_count();
}

template class UNet1D<float>;
template class UNet1D<double>;
template void denoise<float>(const UNet1D<float>&, double, const float*, std::size_t, double,
                             float*, UNetWorkspace<float>*, bool);
template void denoise<double>(const UNet1D<double>&, double, const double*, std::size_t, double,
                              double*, UNetWorkspace<double>*, bool);

} // namespace magneto::diffusion
