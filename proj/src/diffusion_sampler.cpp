#include "magneto/diffusion/sampler.hpp"
#include "magneto/diffusion/unet.hpp"
#include "magneto/errors.hpp"
#include "magneto/rng.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

namespace magneto::diffusion {

std::vector<double> ddim_sample(const DenoiserFn& denoiser, const NoiseSchedule& sched,
                                double churn, std::size_t length, std::uint64_t seed) {
    if (churn < 0.0 || churn > 1.0) throw ConfigError("ddim_sample: churn must lie in [0, 1]");
    const auto sigmas = schedule_sigmas(sched);
    Rng rng(derive_seed(seed, 0xdd1, 0));

    std::vector<double> x(length);
    for (auto& v : x) v = sched.sigma_max * rng.gauss();

    std::vector<double> d(length);
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const double sigma = sigmas[i];
        const double sigma_next = (i + 1 < sigmas.size()) ? sigmas[i + 1] : 0.0;
        denoiser(x.data(), length, sigma, d.data());
        if (sigma_next == 0.0) {
            x = d;
            break;
        }
        double noise_std = 0.0;
        double coef = sigma_next;
        if (churn > 0.0) {
            const double r = sigma_next / sigma;
            noise_std = churn * sigma_next * std::sqrt(std::max(0.0, 1.0 - r * r));
            coef = std::sqrt(std::max(0.0, sigma_next * sigma_next - noise_std * noise_std));
        }
        for (std::size_t n = 0; n < length; ++n) {
            double v = d[n] + coef * (x[n] - d[n]) / sigma;
            if (noise_std > 0.0) v += noise_std * rng.gauss();
            x[n] = v;
        }
    }
    return x;
}

DenoiserFn checkpoint_denoiser(const nn::Checkpoint& ckpt) {
    auto net = std::make_shared<UNet1D<float>>();
    UNetTopology topo;
    const auto& meta = ckpt.meta;
    topo.channels = meta.at("channels").get<std::vector<int>>();
    topo.embed_dim = meta.at("embed_dim").get<int>();
    topo.enc_blocks = meta.at("enc_blocks").get<std::vector<int>>();
    topo.bottleneck_blocks = meta.at("bottleneck_blocks").get<int>();
    topo.bottleneck_dilations = meta.at("bottleneck_dilations").get<std::vector<int>>();
    topo.kernel = meta.value("kernel", 5);
    net->build(topo, 0);

    const bool has_ema = !ckpt.params.entries().empty() &&
                         ckpt.params.contains("ema." + net->params.entries().front().name);
    for (auto& e : net->params.entries()) {
        const std::string src = has_ema ? "ema." + e.name : e.name;
        e.values = ckpt.params.at(src);
    }
    const double sigma_data = meta.at("sigma_data").get<double>();

    return [net, sigma_data](const double* x, std::size_t n, double sigma, double* out) {
        std::vector<float> xf(n), df(n);
        for (std::size_t i = 0; i < n; ++i) xf[i] = float(x[i]);
        denoise(*net, sigma_data, xf.data(), n, sigma, df.data(), nullptr, true);
        for (std::size_t i = 0; i < n; ++i) out[i] = double(df[i]);
    };
}

std::vector<double> generate_chunked(const DenoiserFn& denoiser, const NoiseSchedule& sched,
                                     double churn, std::size_t segment_len,
                                     std::size_t total_len, std::uint64_t seed,
                                     int n_steps_override) {
    NoiseSchedule s = sched;
    if (n_steps_override > 0) s.n_steps = n_steps_override;

    if (total_len <= segment_len) {
        auto seg = ddim_sample(denoiser, s, churn, segment_len, seed);
        seg.resize(total_len);
        return seg;
    }

    const std::size_t hop = segment_len * 3 / 4; // 25% overlap
    const std::size_t overlap = segment_len - hop;
    const std::size_t n_chunks =
        1 + (total_len - segment_len + hop - 1) / hop;

    std::vector<double> out(total_len, 0.0);
    static constexpr double kHalfPi = 1.5707963267948966;
    for (std::size_t k = 0; k < n_chunks; ++k) {
        const auto seg = ddim_sample(denoiser, s, churn, segment_len,
                                     derive_seed(seed, 0xc4, k));
        const std::size_t pos = k * hop;
        for (std::size_t i = 0; i < segment_len; ++i) {
            const std::size_t idx = pos + i;
            if (idx >= total_len) break;
            double g = 1.0;
            if (k > 0 && i < overlap)
                g *= std::sin(kHalfPi * (double(i) + 0.5) / double(overlap));
            if (k + 1 < n_chunks && i >= hop)
                g *= std::cos(kHalfPi * (double(i - hop) + 0.5) / double(overlap));
            out[idx] += g * seg[i];
        }
    }
    return out;
}

namespace {

NoiseSchedule schedule_from_meta(const nlohmann::json& meta) {
    NoiseSchedule s;
    s.sigma_data = meta.at("sigma_data").get<double>();
    s.sigma_min = meta.at("sigma_min").get<double>();
    s.sigma_max = meta.at("sigma_max").get<double>();
    s.n_steps = meta.at("n_steps").get<int>();
    return s;
}

} // namespace

AudioBuffer generate_noise(const nn::Checkpoint& ckpt, double duration_s, std::uint64_t seed,
                           int n_steps_override, double churn) {
    if (ckpt.arch != kHissArch)
        throw ConfigError("generate_noise: expected " + std::string(kHissArch) +
                          " checkpoint, got " + ckpt.arch);
    if (duration_s <= 0.0) throw ConfigError("generate_noise: duration must be positive");
    const NoiseSchedule sched = schedule_from_meta(ckpt.meta);
    const int fs = ckpt.meta.at("sample_rate").get<int>();
    const std::size_t seg = ckpt.meta.at("segment_len").get<std::size_t>();
    const std::size_t total = std::size_t(std::llround(duration_s * fs));

    const auto denoiser = checkpoint_denoiser(ckpt);
    const auto data = generate_chunked(denoiser, sched, churn, seg, total, seed,
                                       n_steps_override);
    AudioBuffer buf(1, total, fs);
    for (std::size_t i = 0; i < total; ++i) buf.ch(0)[i] = float(data[i]);
    return buf;
}

DelayTrajectory generate_trajectory(const nn::Checkpoint& ckpt, std::size_t n_points,
                                    double mean_delay, std::uint64_t seed,
                                    int n_steps_override, double churn) {
    if (ckpt.arch != kTrajArch)
        throw ConfigError("generate_trajectory: expected " + std::string(kTrajArch) +
                          " checkpoint, got " + ckpt.arch);
    if (n_points == 0) throw ConfigError("generate_trajectory: need at least one point");
    const NoiseSchedule sched = schedule_from_meta(ckpt.meta);
    const std::size_t seg = ckpt.meta.at("segment_len").get<std::size_t>();

    const auto denoiser = checkpoint_denoiser(ckpt);
    const auto fluct = generate_chunked(denoiser, sched, churn, seg, n_points, seed,
                                        n_steps_override);

    DelayTrajectory traj;
    traj.rate_hz = ckpt.meta.value("rate_hz", 100.0);
    traj.audio_sample_rate = ckpt.meta.value("audio_sample_rate", 44100);
    traj.values.resize(n_points);
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < n_points; ++i) {
        double v = fluct[i] + mean_delay;
        if (v < 0.0) {
            v = 0.0;
            ++clamped;
        }
        traj.values[i] = v;
    }
    if (clamped * 100 > n_points)
        std::fprintf(stderr,
                     "generate_trajectory: warning: %zu/%zu points clamped at zero "
                     "(mean_delay too small)\n",
                     clamped, n_points);
    return traj;
}

} // namespace magneto::diffusion
