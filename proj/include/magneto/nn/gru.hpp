#pragma once

#include "magneto/nn/params.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace magneto::nn {

// z = sigmoid(Wz x + Uz h + bz)
// r = sigmoid(Wr x + Ur h + br)
// n = tanh(Wn x + b_in + r o (Un h + b_hn))
// h' = (1 - z) o n + z o h
template <typename T>
class GruCell {
public:
    GruCell() = default;
    GruCell(int input_dim, int hidden) : in_(input_dim), h_(hidden) {}

    int input_dim() const { return in_; }
    int hidden() const { return h_; }

    static void declare(ParamStore<T>& store, const std::string& prefix, int input_dim,
                        int hidden) {
        const std::size_t i = std::size_t(input_dim), h = std::size_t(hidden);
        store.add(prefix + ".wz", {h, i});
        store.add(prefix + ".wr", {h, i});
        store.add(prefix + ".wn", {h, i});
        store.add(prefix + ".uz", {h, h});
        store.add(prefix + ".ur", {h, h});
        store.add(prefix + ".un", {h, h});
        store.add(prefix + ".bz", {h});
        store.add(prefix + ".br", {h});
        store.add(prefix + ".bin", {h});
        store.add(prefix + ".bhn", {h});
    }

    static void init(ParamStore<T>& store, const std::string& prefix, int hidden, Rng& rng) {
        const double bound = 1.0 / std::sqrt(double(hidden));
        for (const char* name : {".wz", ".wr", ".wn", ".uz", ".ur", ".un",
                                 ".bz", ".br", ".bin", ".bhn"})
            uniform_init(store.at(prefix + name), bound, rng);
    }

    void bind(ParamStore<T>& store, const std::string& prefix) {
        wz = store.at(prefix + ".wz").data();
        wr = store.at(prefix + ".wr").data();
        wn = store.at(prefix + ".wn").data();
        uz = store.at(prefix + ".uz").data();
        ur = store.at(prefix + ".ur").data();
        un = store.at(prefix + ".un").data();
        bz = store.at(prefix + ".bz").data();
        br = store.at(prefix + ".br").data();
        bin = store.at(prefix + ".bin").data();
        bhn = store.at(prefix + ".bhn").data();
    }

    struct Cache {
        std::vector<T> x, h_prev, z, r, n, m; // m = Un h + b_hn
    };

    void forward(const T* x, const T* h_prev, T* h_out, Cache* cache) const {
        const int H = h_, I = in_;
        std::vector<T> z(H), r(H), n(H), m(H);
        for (int j = 0; j < H; ++j) {
            T az = bz[j], ar = br[j], an = bin[j], am = bhn[j];
            const T* wzr = wz + std::size_t(j) * I;
            const T* wrr = wr + std::size_t(j) * I;
            const T* wnr = wn + std::size_t(j) * I;
            for (int i = 0; i < I; ++i) {
                az += wzr[i] * x[i];
                ar += wrr[i] * x[i];
                an += wnr[i] * x[i];
            }
            const T* uzr = uz + std::size_t(j) * H;
            const T* urr = ur + std::size_t(j) * H;
            const T* unr = un + std::size_t(j) * H;
            for (int i = 0; i < H; ++i) {
                az += uzr[i] * h_prev[i];
                ar += urr[i] * h_prev[i];
                am += unr[i] * h_prev[i];
            }
            z[std::size_t(j)] = T(1) / (T(1) + std::exp(-az));
            r[std::size_t(j)] = T(1) / (T(1) + std::exp(-ar));
            m[std::size_t(j)] = am;
            n[std::size_t(j)] = std::tanh(an + r[std::size_t(j)] * am);
        }
        for (int j = 0; j < H; ++j)
            h_out[j] = (T(1) - z[std::size_t(j)]) * n[std::size_t(j)] +
                       z[std::size_t(j)] * h_prev[j];
        if (cache) {
            cache->x.assign(x, x + I);
            cache->h_prev.assign(h_prev, h_prev + H);
            cache->z = std::move(z);
            cache->r = std::move(r);
            cache->n = std::move(n);
            cache->m = std::move(m);
        }
    }

    /// Mutable gradient views bound to a grad store with the same names.
    struct Grads {
        T *wz, *wr, *wn, *uz, *ur, *un, *bz, *br, *bin, *bhn;
        void bind(ParamStore<T>& store, const std::string& prefix) {
            wz = store.at(prefix + ".wz").data();
            wr = store.at(prefix + ".wr").data();
            wn = store.at(prefix + ".wn").data();
            uz = store.at(prefix + ".uz").data();
            ur = store.at(prefix + ".ur").data();
            un = store.at(prefix + ".un").data();
            bz = store.at(prefix + ".bz").data();
            br = store.at(prefix + ".br").data();
            bin = store.at(prefix + ".bin").data();
            bhn = store.at(prefix + ".bhn").data();
        }
    };

    // dh_total: dL/dh_out (all contributions summed). Produces dL/dh_prev in
    // dh_prev (overwritten) and accumulates parameter grads; dx may be null.
    void backward(const Cache& c, const T* dh_total, Grads& g, T* dh_prev, T* dx) const {
        const int H = h_, I = in_;
        std::vector<T> dz_pre(H), dr_pre(H), dn_pre(H), dm(H);
        for (int j = 0; j < H; ++j) {
            const T dh = dh_total[j];
            const T z = c.z[std::size_t(j)], r = c.r[std::size_t(j)],
                    n = c.n[std::size_t(j)], m = c.m[std::size_t(j)];
            const T dzj = dh * (c.h_prev[std::size_t(j)] - n);
            const T dnj = dh * (T(1) - z);
            const T dnp = dnj * (T(1) - n * n);
            dn_pre[std::size_t(j)] = dnp;
            dm[std::size_t(j)] = dnp * r;
            dr_pre[std::size_t(j)] = dnp * m * r * (T(1) - r);
            dz_pre[std::size_t(j)] = dzj * z * (T(1) - z);
        }
        for (int j = 0; j < H; ++j) {
            const std::size_t ji = std::size_t(j) * I;
            const std::size_t jh = std::size_t(j) * H;
            const T dzp = dz_pre[std::size_t(j)], drp = dr_pre[std::size_t(j)],
                    dnp = dn_pre[std::size_t(j)], dmj = dm[std::size_t(j)];
            for (int i = 0; i < I; ++i) {
                g.wz[ji + std::size_t(i)] += dzp * c.x[std::size_t(i)];
                g.wr[ji + std::size_t(i)] += drp * c.x[std::size_t(i)];
                g.wn[ji + std::size_t(i)] += dnp * c.x[std::size_t(i)];
            }
            for (int i = 0; i < H; ++i) {
                g.uz[jh + std::size_t(i)] += dzp * c.h_prev[std::size_t(i)];
                g.ur[jh + std::size_t(i)] += drp * c.h_prev[std::size_t(i)];
                g.un[jh + std::size_t(i)] += dmj * c.h_prev[std::size_t(i)];
            }
            g.bz[j] += dzp;
            g.br[j] += drp;
            g.bin[j] += dnp;
            g.bhn[j] += dmj;
        }
        for (int i = 0; i < H; ++i) {
            T acc = dh_total[i] * c.z[std::size_t(i)];
            for (int j = 0; j < H; ++j) {
                acc += uz[std::size_t(j) * H + std::size_t(i)] * dz_pre[std::size_t(j)];
                acc += ur[std::size_t(j) * H + std::size_t(i)] * dr_pre[std::size_t(j)];
                acc += un[std::size_t(j) * H + std::size_t(i)] * dm[std::size_t(j)];
            }
            dh_prev[i] = acc;
        }
        if (dx) {
            for (int i = 0; i < I; ++i) {
                T acc = T(0);
                for (int j = 0; j < H; ++j) {
                    acc += wz[std::size_t(j) * I + std::size_t(i)] * dz_pre[std::size_t(j)];
                    acc += wr[std::size_t(j) * I + std::size_t(i)] * dr_pre[std::size_t(j)];
                    acc += wn[std::size_t(j) * I + std::size_t(i)] * dn_pre[std::size_t(j)];
                }
                dx[i] += acc;
            }
        }
    }

    const T *wz = nullptr, *wr = nullptr, *wn = nullptr;
    const T *uz = nullptr, *ur = nullptr, *un = nullptr;
    const T *bz = nullptr, *br = nullptr, *bin = nullptr, *bhn = nullptr;

private:
    int in_ = 1, h_ = 1;
};

extern template class GruCell<float>;
extern template class GruCell<double>;

} // namespace magneto::nn
