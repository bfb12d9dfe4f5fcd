#include "magneto/tape_rnn.hpp"
#include "magneto/delay_line.hpp"
#include "magneto/errors.hpp"

#include <cmath>

namespace magneto {

void TapeRnnConfig::validate() const {
    if (hidden_size < 1) throw ConfigError("tape_rnn: hidden_size must be >= 1");
    if (tbptt_chunk < 1) throw ConfigError("tape_rnn: tbptt_chunk must be >= 1");
    if (chunks_per_segment < 1) throw ConfigError("tape_rnn: chunks_per_segment must be >= 1");
    if (batch < 1) throw ConfigError("tape_rnn: batch must be >= 1");
    if (lr <= 0.0) throw ConfigError("tape_rnn: lr must be positive");
}

std::size_t warmup_length(TrainingScheme scheme, double max_delay_samples) {
    if (scheme == TrainingScheme::SupervisedI) return 1024;
    std::size_t need = std::size_t(std::ceil(std::max(max_delay_samples, 0.0)));
    std::size_t p = 1;
    while (p < need) p <<= 1;
    return std::max<std::size_t>(p, 1);
}

template <typename T>
void TapeRnnModel<T>::build(int hidden_size, std::uint64_t seed) {
    hidden = hidden_size;
    params = nn::ParamStore<T>();
    nn::GruCell<T>::declare(params, "gru", 1, hidden);
    params.add("out.w", {std::size_t(hidden)});
    params.add("out.b", {1});
    Rng rng(derive_seed(seed, 0x676775, 0));
    nn::GruCell<T>::init(params, "gru", hidden, rng);
    const double bound = 1.0 / std::sqrt(double(hidden));
    nn::uniform_init(params.at("out.w"), bound, rng);
    nn::uniform_init(params.at("out.b"), bound, rng);
    bind();
}

template <typename T>
void TapeRnnModel<T>::bind() {
    cell = nn::GruCell<T>(1, hidden);
    cell.bind(params, "gru");
    w_out = params.at("out.w").data();
    b_out = params.at("out.b").data();
}

template <typename T>
void TapeRnnModel<T>::forward(const T* x, std::size_t n, std::vector<T>& h, T* y,
                              std::vector<typename nn::GruCell<T>::Cache>* caches,
                              std::vector<T>* h_trace) const {
    const int H = hidden;
    if (h.size() != std::size_t(H)) throw ConfigError("tape_rnn: bad hidden state size");
    if (h_trace) h_trace->insert(h_trace->end(), h.begin(), h.end());
    std::vector<T> h_next(std::size_t(H));
    for (std::size_t t = 0; t < n; ++t) {
        typename nn::GruCell<T>::Cache* c = nullptr;
        if (caches) {
            caches->emplace_back();
            c = &caches->back();
        }
        cell.forward(&x[t], h.data(), h_next.data(), c);
        h.swap(h_next);
        T acc = b_out[0];
        for (int j = 0; j < H; ++j) acc += w_out[j] * h[std::size_t(j)];
        if (!std::isfinite(double(acc)))
            throw TrainError("tape_rnn: non-finite activation");
        y[t] = acc;
        if (h_trace) h_trace->insert(h_trace->end(), h.begin(), h.end());
    }
}

template <typename T>
void rnn_backward_chunk(const TapeRnnModel<T>& model,
                        const std::vector<typename nn::GruCell<T>::Cache>& caches,
                        const std::vector<T>& h_trace, const T* dy, std::size_t n,
                        TapeRnnGrads<T>& grads, std::vector<T>& dh) {
    const int H = model.hidden;
    if (caches.size() != n || h_trace.size() != (n + 1) * std::size_t(H))
        throw ConfigError("rnn_backward_chunk: cache/trace size mismatch");
    std::vector<T> dh_prev(std::size_t(H));
    for (std::size_t t = n; t-- > 0;) {
        const T* h_t = &h_trace[(t + 1) * std::size_t(H)];
        const T dyt = dy[t];
        grads.b_out[0] += dyt;
        for (int j = 0; j < H; ++j) {
            grads.w_out[j] += dyt * h_t[j];
            dh[std::size_t(j)] += dyt * model.w_out[j];
        }
        model.cell.backward(caches[t], dh.data(), grads.cell, dh_prev.data(), nullptr);
        dh.swap(dh_prev);
    }
}

template <typename T>
T esr_with_grad(const T* pred, const T* target, std::size_t n, T* dpred, T grad_scale) {
    T num = T(0), den = T(0);
    for (std::size_t i = 0; i < n; ++i) {
        const T e = target[i] - pred[i];
        num += e * e;
        den += target[i] * target[i];
    }
    if (den <= T(0)) {
        if (dpred)
            for (std::size_t i = 0; i < n; ++i) dpred[i] = T(0);
        return T(0); // silent chunk contributes nothing
    }
    if (dpred) {
        const T s = grad_scale * T(2) / den;
        for (std::size_t i = 0; i < n; ++i) dpred[i] = s * (pred[i] - target[i]);
    }
    return num / den;
}

template <typename T>
void delayed_prediction(const std::vector<T>& hist, const std::vector<double>& tau_abs,
                        std::size_t i0, std::size_t i1, T* pred) {
    for (std::size_t i = i0; i < i1; ++i) {
        const auto taps = delay_taps(tau_abs[i]);
        const std::ptrdiff_t lo = std::ptrdiff_t(i) - taps.k_lo;
        const std::ptrdiff_t hi = lo - 1;
        T acc = T(0);
        if (lo >= 0 && lo < std::ptrdiff_t(hist.size())) acc += T(taps.w_lo) * hist[std::size_t(lo)];
        if (hi >= 0 && hi < std::ptrdiff_t(hist.size())) acc += T(taps.w_hi) * hist[std::size_t(hi)];
        pred[i - i0] = acc;
    }
}

template <typename T>
void delayed_prediction_backward(const std::vector<double>& tau_abs, std::size_t i0,
                                 std::size_t i1, const T* dpred, std::vector<T>& dhist,
                                 std::size_t trunc_start) {
    for (std::size_t i = i0; i < i1; ++i) {
        const auto taps = delay_taps(tau_abs[i]);
        const std::ptrdiff_t lo = std::ptrdiff_t(i) - taps.k_lo;
        const std::ptrdiff_t hi = lo - 1;
        const T g = dpred[i - i0];
        if (lo >= std::ptrdiff_t(trunc_start) && lo < std::ptrdiff_t(dhist.size()))
            dhist[std::size_t(lo)] += T(taps.w_lo) * g;
        if (hi >= std::ptrdiff_t(trunc_start) && hi < std::ptrdiff_t(dhist.size()))
            dhist[std::size_t(hi)] += T(taps.w_hi) * g;
    }
}

nn::Checkpoint tape_rnn_to_checkpoint(const TapeRnnModel<float>& model,
                                      const nlohmann::json& extra_meta) {
    nn::Checkpoint ckpt;
    ckpt.arch = kTapeRnnArch;
    ckpt.meta = extra_meta;
    ckpt.meta["hidden_size"] = model.hidden;
    ckpt.params = model.params;
    return ckpt;
}

void tape_rnn_from_checkpoint(const nn::Checkpoint& ckpt, TapeRnnModel<float>& model) {
    if (ckpt.arch != kTapeRnnArch)
        throw ConfigError("checkpoint architecture mismatch: " + ckpt.arch);
    model.hidden = ckpt.meta.at("hidden_size").get<int>();
    model.params = nn::ParamStore<float>();
    for (const auto& e : ckpt.params.entries()) {
        if (e.name.rfind("adam.", 0) == 0) continue; // optimizer state rides along on resume
        model.params.add(e.name, e.shape) = e.values;
    }
    model.bind();
}

std::vector<float> tape_rnn_infer(const nn::Checkpoint& ckpt, const std::vector<float>& x,
                                  const DelayTrajectory* traj, const std::vector<float>* noise) {
    TapeRnnModel<float> model;
    tape_rnn_from_checkpoint(ckpt, model);
    std::vector<float> y(x.size());
    std::vector<float> h(std::size_t(model.hidden), 0.0f);
    model.forward(x.data(), x.size(), h, y.data());
    if (traj && !traj->values.empty()) {
        const auto per_sample = upsample_trajectory(*traj, traj->audio_sample_rate, y.size());
        y = apply_time_varying_delay(y, per_sample);
    }
    if (noise) {
        if (noise->size() < y.size()) throw ConfigError("infer: noise shorter than signal");
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += (*noise)[i];
    }
    return y;
}

template struct TapeRnnModel<float>;
template struct TapeRnnModel<double>;
template struct TapeRnnGrads<float>;
template struct TapeRnnGrads<double>;
template void rnn_backward_chunk<float>(const TapeRnnModel<float>&,
                                        const std::vector<nn::GruCell<float>::Cache>&,
                                        const std::vector<float>&, const float*, std::size_t,
                                        TapeRnnGrads<float>&, std::vector<float>&);
template void rnn_backward_chunk<double>(const TapeRnnModel<double>&,
                                         const std::vector<nn::GruCell<double>::Cache>&,
                                         const std::vector<double>&, const double*, std::size_t,
                                         TapeRnnGrads<double>&, std::vector<double>&);
template float esr_with_grad<float>(const float*, const float*, std::size_t, float*, float);
template double esr_with_grad<double>(const double*, const double*, std::size_t, double*, double);
template void delayed_prediction<float>(const std::vector<float>&, const std::vector<double>&,
                                        std::size_t, std::size_t, float*);
template void delayed_prediction<double>(const std::vector<double>&, const std::vector<double>&,
                                         std::size_t, std::size_t, double*);
template void delayed_prediction_backward<float>(const std::vector<double>&, std::size_t,
                                                 std::size_t, const float*, std::vector<float>&,
                                                 std::size_t);
template void delayed_prediction_backward<double>(const std::vector<double>&, std::size_t,
                                                  std::size_t, const double*,
                                                  std::vector<double>&, std::size_t);

} // namespace magneto
