#include "magneto/nn/optim.hpp"

#include <cmath>

namespace magneto::nn {

template <typename T>
void Adam<T>::step(ParamStore<T>& params, const ParamStore<T>& grads) {
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, double(step_));
    const double bc2 = 1.0 - std::pow(beta2_, double(step_));
    auto& m_entries = m_.entries();
    auto& v_entries = v_.entries();
    const auto& g_entries = grads.entries();
    auto& p_entries = params.entries();

    for (std::size_t e = 0; e < p_entries.size(); ++e) {
        auto& p = p_entries[e].values;
        const auto& g = g_entries[e].values;
        auto& m = m_entries[e].values;
        auto& v = v_entries[e].values;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = double(g[i]);
            if (!std::isfinite(gi))
                throw TrainError("Adam: non-finite gradient in " + p_entries[e].name);
            const double mi = beta1_ * double(m[i]) + (1.0 - beta1_) * gi;
            const double vi = beta2_ * double(v[i]) + (1.0 - beta2_) * gi * gi;
            m[i] = T(mi);
            v[i] = T(vi);
            const double mhat = mi / bc1;
            const double vhat = vi / bc2;
            p[i] = T(double(p[i]) - lr_ * mhat / (std::sqrt(vhat) + eps_));
        }
    }
}

template <typename T>
void ema_update(ParamStore<T>& ema, const ParamStore<T>& params, double decay) {
    auto& e_entries = ema.entries();
    const auto& p_entries = params.entries();
    for (std::size_t e = 0; e < e_entries.size(); ++e) {
        auto& dst = e_entries[e].values;
        const auto& src = p_entries[e].values;
        for (std::size_t i = 0; i < dst.size(); ++i)
            dst[i] = T(decay * double(dst[i]) + (1.0 - decay) * double(src[i]));
    }
}

template <typename T>
double clip_grad_norm(ParamStore<T>& grads, double max_norm) {
    double sq = 0.0;
    for (const auto& e : grads.entries())
        for (T g : e.values) sq += double(g) * double(g);
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const T scale = T(max_norm / norm);
        for (auto& e : grads.entries())
            for (auto& g : e.values) g *= scale;
    }
    return norm;
}

template class Adam<float>;
template class Adam<double>;
template void ema_update<float>(ParamStore<float>&, const ParamStore<float>&, double);
template void ema_update<double>(ParamStore<double>&, const ParamStore<double>&, double);
template double clip_grad_norm<float>(ParamStore<float>&, double);
template double clip_grad_norm<double>(ParamStore<double>&, double);

} // namespace magneto::nn
