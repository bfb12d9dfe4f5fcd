#include "magneto/oracle.hpp"
#include "magneto/delay_line.hpp"
#include "magneto/errors.hpp"
#include "magneto/rng.hpp"

#include <algorithm>
#include <cmath>

namespace magneto {

static constexpr double kPi = 3.14159265358979323846;

OracleConfig OracleConfig::defaults(int sample_rate) {
    OracleConfig cfg;
    cfg.pre_filter = {design_highpass(20.0, 0.707, sample_rate)};
    // playback losses lumped: head-bump shelf plus high rolloff
    cfg.post_filter = {design_low_shelf(60.0, 3.0, sample_rate),
                       design_lowpass(11000.0, 0.6, sample_rate)};
    return cfg;
}

void OracleConfig::validate() const {
    hysteresis.validate();
    if (bias_amount < 0.0 || bias_amount > 1.0)
        throw ConfigError("oracle: bias_amount must lie in [0, 1]");
    if (drive_gain < 0.0) throw ConfigError("oracle: drive_gain must be >= 0");
    if (base_delay_samples < 0.0)
        throw ConfigError("oracle: base delay must be >= 0");
    if (timing_enabled && wow.rate_hz >= 0.5 * pulse_rate_hz)
        throw ConfigError("oracle: wow rate must stay below half the pulse rate");
    if (hiss.level_rms < 0.0) throw ConfigError("oracle: hiss level must be >= 0");
}

DelayTrajectory synth_trajectory(const OracleConfig& cfg, std::size_t length_points,
                                 std::uint64_t seed) {
    cfg.validate();
    if (length_points < 1) throw ConfigError("synth_trajectory: need at least one point");

    Rng rng(derive_seed(seed, 0x7261, 0));
    const double phase0 = rng.uniform(0.0, 2.0 * kPi);
    const double rate = cfg.pulse_rate_hz;

    // one-pole lowpass with analytic unit-variance normalization
    auto lowpassed_noise = [&](double cutoff_hz, std::size_t n, Rng& r) {
        const double a = std::exp(-2.0 * kPi * std::min(cutoff_hz, 0.499 * rate) / rate);
        const double norm = std::sqrt((1.0 + a) / (1.0 - a));
        std::vector<double> out(n);
        double y = 0.0;
        for (std::size_t i = 0; i < n + 256; ++i) { // warm up to stationarity
            y = (1.0 - a) * r.gauss() + a * y;
            if (i >= 256) out[i - 256] = y * norm;
        }
        return out;
    };

    Rng slow_rng = rng.split(1);
    Rng flutter_rng = rng.split(2);
    const auto slow = lowpassed_noise(0.15, length_points, slow_rng);
    const auto fast = lowpassed_noise(cfg.flutter.bandwidth_hz, length_points, flutter_rng);

    DelayTrajectory traj;
    traj.rate_hz = rate;
    traj.audio_sample_rate = 44100;
    traj.values.resize(length_points);
    for (std::size_t k = 0; k < length_points; ++k) {
        const double wow_mod = 1.0 + cfg.wow.variance * slow[k];
        double v = cfg.base_delay_samples +
                   cfg.wow.depth_samples *
                       std::sin(2.0 * kPi * cfg.wow.rate_hz * double(k) / rate + phase0) * wow_mod +
                   cfg.flutter.depth_samples * fast[k];
        traj.values[k] = std::max(v, 0.0);
    }
    return traj;
}

AudioBuffer synth_hiss(const HissConfig& cfg, std::size_t length, std::uint64_t seed,
                       int sample_rate) {
    if (length < 1) throw ConfigError("synth_hiss: need at least one sample");
    AudioBuffer buf(1, length, sample_rate);
    if (cfg.level_rms <= 0.0 && cfg.hum_level <= 0.0) return buf;

    Rng rng(derive_seed(seed, 0x6869, 0));
    auto& out = buf.ch(0);

    if (cfg.level_rms > 0.0) {
        // -3 dB/octave via three cascaded pole/zero pairs
        static const double poles[3] = {0.99572754, 0.94790649, 0.53567505};
        static const double zeros[3] = {0.98443604, 0.83392334, 0.07568359};
        double x1[3] = {0.0, 0.0, 0.0};
        double y1[3] = {0.0, 0.0, 0.0};
        std::vector<double> pink(length);
        for (std::size_t i = 0; i < length + 1024; ++i) {
            double v = rng.gauss();
            for (int b = 0; b < 3; ++b) {
                const double y = v - zeros[b] * x1[b] + poles[b] * y1[b];
                x1[b] = v;
                y1[b] = y;
                v = y;
            }
            if (i >= 1024) pink[i - 1024] = v;
        }
        double acc = 0.0;
        for (double v : pink) acc += v * v;
        const double scale = cfg.level_rms / std::sqrt(std::max(acc / double(length), 1e-300));
        for (std::size_t i = 0; i < length; ++i) out[i] = float(pink[i] * scale);
    }

    if (cfg.hum_level > 0.0) {
        const double harmonics[3] = {1.0, 0.5, 0.25};
        for (int h = 0; h < 3; ++h) {
            const double f = cfg.hum_hz * double(h + 1);
            if (f >= 0.5 * sample_rate) break;
            const double phase = rng.uniform(0.0, 2.0 * kPi);
            const double amp = cfg.hum_level * harmonics[h];
            for (std::size_t i = 0; i < length; ++i)
                out[i] += float(amp * std::sin(2.0 * kPi * f * double(i) / sample_rate + phase));
        }
    }
    return buf;
}

TapeResult process_tape(const AudioBuffer& x, const OracleConfig& cfg) {
    x.validate();
    cfg.validate();
    if (x.num_channels() > 2) throw ConfigError("process_tape: mono or stereo only");

    TapeResult res;
    res.output = AudioBuffer(x.num_channels(), x.length(), x.sample_rate);

    HysteresisParams hp = cfg.hysteresis;
    hp.k *= 1.0 - 0.9 * cfg.bias_amount; // bias narrows the loop
    res.effective_coercivity = hp.k;

    for (int c = 0; c < x.num_channels(); ++c) {
        std::vector<float> work = x.ch(c);
        run_cascade(cfg.pre_filter, work);
        HysteresisState state;
        for (auto& v : work)
            v = float(hysteresis_step(state, cfg.drive_gain * double(v), hp));
        run_cascade(cfg.post_filter, work);
        res.output.ch(c) = std::move(work);
    }

    if (cfg.timing_enabled) {
        const double pts_per_sample = cfg.pulse_rate_hz / double(x.sample_rate);
        const std::size_t n_points =
            std::size_t(std::ceil(double(x.length()) * pts_per_sample)) + 1;
        DelayTrajectory traj = synth_trajectory(cfg, n_points, cfg.seed);
        traj.audio_sample_rate = x.sample_rate;
        const auto per_sample = upsample_trajectory(traj, x.sample_rate, x.length());
        double max_d = 0.0;
        for (double d : per_sample) max_d = std::max(max_d, d);
        res.delay_capacity = int(std::ceil(max_d)) + 1;
        for (int c = 0; c < x.num_channels(); ++c)
            res.output.ch(c) = apply_time_varying_delay(res.output.ch(c), per_sample);
        res.trajectory = std::move(traj);
    }

    if (cfg.hiss.level_rms > 0.0 || cfg.hiss.hum_level > 0.0) {
        for (int c = 0; c < x.num_channels(); ++c) {
            const AudioBuffer noise = synth_hiss(cfg.hiss, x.length(),
                                                 derive_seed(cfg.seed, 0x6e6f, std::uint64_t(c)),
                                                 x.sample_rate);
            auto& ch = res.output.ch(c);
            for (std::size_t i = 0; i < ch.size(); ++i) ch[i] += noise.ch(0)[i];
        }
    }
    return res;
}

} // namespace magneto
