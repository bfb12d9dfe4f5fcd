#include "magneto/dataset.hpp"
#include "magneto/config_json.hpp"
#include "magneto/errors.hpp"
#include "magneto/pulse.hpp"
#include "magneto/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

namespace magneto {

static constexpr double kPi = 3.14159265358979323846;

void DatasetManifest::validate() const {
    oracle_config.validate();
    if (splits.empty()) throw ConfigError("manifest: at least one split required");
    for (const auto& s : splits) {
        if (s.name.empty()) throw ConfigError("manifest: split name must not be empty");
        if (s.minutes <= 0.0) throw ConfigError("manifest: split minutes must be positive");
    }
    if (out_dir.empty()) throw ConfigError("manifest: out_dir required");
    if (sample_rate <= 0) throw ConfigError("manifest: sample_rate must be positive");
    if (file_seconds < 5.0) throw ConfigError("manifest: file_seconds must be >= 5");
}

namespace {

void add_fades(std::vector<float>& x, std::size_t fade) {
    fade = std::min(fade, x.size() / 2);
    for (std::size_t i = 0; i < fade; ++i) {
        const float g = float(i) / float(fade);
        x[i] *= g;
        x[x.size() - 1 - i] *= g;
    }
}

std::vector<float> event_sine_mix(std::size_t n, int fs, Rng& rng) {
    std::vector<float> out(n, 0.0f);
    const int partials = 1 + int(rng.below(3));
    double f = std::exp(rng.uniform(std::log(40.0), std::log(10000.0)));
    double amp = 1.0;
    for (int p = 0; p < partials; ++p) {
        const double phase = rng.uniform(0.0, 2.0 * kPi);
        if (f > 0.45 * fs) break;
        for (std::size_t i = 0; i < n; ++i)
            out[i] += float(amp * std::sin(2.0 * kPi * f * double(i) / fs + phase));
        f *= rng.uniform(1.5, 3.0);
        amp *= rng.uniform(0.3, 0.7);
    }
    return out;
}

std::vector<float> event_chirp(std::size_t n, int fs, Rng& rng) {
    std::vector<float> out(n);
    const double f0 = std::exp(rng.uniform(std::log(40.0), std::log(4000.0)));
    const double f1 = std::exp(rng.uniform(std::log(f0), std::log(10000.0)));
    const double L = double(n) / fs / std::log(std::max(f1 / f0, 1.001));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i) / fs;
        out[i] = float(std::sin(2.0 * kPi * f0 * L * (std::exp(t / L) - 1.0)));
    }
    return out;
}

std::vector<float> event_noise_burst(std::size_t n, int fs, Rng& rng) {
    std::vector<float> out(n);
    for (auto& v : out) v = float(rng.gauss());
    const double f = std::exp(rng.uniform(std::log(80.0), std::log(8000.0)));
    std::vector<BiquadCoeffs> band = {design_highpass(f / 2.0, 0.707, fs),
                                      design_lowpass(std::min(2.0 * f, 0.45 * double(fs)), 0.707, fs)};
    run_cascade(band, out);
    // percussive decay
    const double decay = rng.uniform(2.0, 8.0);
    for (std::size_t i = 0; i < n; ++i)
        out[i] *= float(std::exp(-decay * double(i) / double(n)));
    return out;
}

std::vector<float> event_am_tone(std::size_t n, int fs, Rng& rng) {
    std::vector<float> out(n);
    const double f = std::exp(rng.uniform(std::log(40.0), std::log(10000.0)));
    const double mod_rate = rng.uniform(1.0, 8.0);
    const double depth = rng.uniform(0.3, 1.0);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i) / fs;
        const double env = 1.0 - depth * 0.5 * (1.0 + std::cos(2.0 * kPi * mod_rate * t));
        out[i] = float(env * std::sin(2.0 * kPi * f * t + phase));
    }
    return out;
}

} // namespace

std::vector<float> synth_program(std::size_t length, int sample_rate, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x7072, 0));
    std::vector<float> out(length, 0.0f);
    std::size_t pos = 0;
    while (pos < length) {
        const std::size_t ev_len =
            std::min(length - pos, std::size_t(rng.uniform(1.5, 4.0) * sample_rate));
        if (ev_len < std::size_t(sample_rate) / 10) break;
        std::vector<float> ev;
        switch (rng.below(4)) {
            case 0: ev = event_sine_mix(ev_len, sample_rate, rng); break;
            case 1: ev = event_chirp(ev_len, sample_rate, rng); break;
            case 2: ev = event_noise_burst(ev_len, sample_rate, rng); break;
            default: ev = event_am_tone(ev_len, sample_rate, rng); break;
        }
        const double peak_db = rng.uniform(-24.0, 0.0);
        const double target = std::pow(10.0, peak_db / 20.0);
        const double p = peak_abs(ev);
        if (p > 0.0) {
            const float g = float(target / p);
            for (auto& v : ev) v *= g;
        }
        add_fades(ev, std::size_t(0.05 * sample_rate));
        std::copy(ev.begin(), ev.end(), out.begin() + std::ptrdiff_t(pos));
        pos += ev_len;
        // occasional short silence between events
        if (rng.uniform() < 0.3) pos += std::size_t(rng.uniform(0.05, 0.2) * sample_rate);
    }
    return out;
}

std::string build_dataset(const DatasetManifest& manifest) {
    manifest.validate();
    namespace fs = std::filesystem;
    const fs::path root(manifest.out_dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw IoError("cannot create out_dir: " + manifest.out_dir);

    nlohmann::json lock;
    lock["manifest"] = manifest_to_json(manifest);
    lock["files"] = nlohmann::json::array();

    PulseTrainSpec pulse_spec;
    pulse_spec.pulse_rate_hz = manifest.oracle_config.pulse_rate_hz;
    pulse_spec.sample_rate = manifest.sample_rate;
    pulse_spec.amplitude = 1.0;

    for (std::size_t si = 0; si < manifest.splits.size(); ++si) {
        const auto& split = manifest.splits[si];
        const fs::path dir = root / split.name;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create split dir: " + dir.string());

        double remaining = split.minutes * 60.0;
        int index = 0;
        while (remaining > 1e-9) {
            const double secs = std::min(remaining, manifest.file_seconds);
            remaining -= secs;
            if (secs < 1.0) break;
            const std::size_t n = std::size_t(std::llround(secs * manifest.sample_rate));
            const std::uint64_t file_seed =
                derive_seed(manifest.seed, si + 1, std::uint64_t(index) + 1);

            AudioBuffer input(2, n, manifest.sample_rate);
            input.ch(0) = synth_program(n, manifest.sample_rate, file_seed);
            pulse_spec.duration_s = secs;
            input.ch(1) = generate_pulse_train(pulse_spec).ch(0);

            OracleConfig cfg = manifest.oracle_config;
            cfg.seed = file_seed;
            const TapeResult res = process_tape(input, cfg);

            char name[64];
            std::snprintf(name, sizeof name, "input_%03d.wav", index);
            const fs::path in_path = dir / name;
            std::snprintf(name, sizeof name, "target_%03d.wav", index);
            const fs::path tgt_path = dir / name;
            write_wav(in_path.string(), input, WavFormat::Float32);
            write_wav(tgt_path.string(), res.output, WavFormat::Float32);

            nlohmann::json entry;
            entry["split"] = split.name;
            entry["input"] = fs::relative(in_path, root).string();
            entry["target"] = fs::relative(tgt_path, root).string();
            entry["seed"] = file_seed;
            entry["samples"] = n;
            if (res.trajectory) {
                std::snprintf(name, sizeof name, "traj_%03d.csv", index);
                const fs::path traj_path = dir / name;
                write_trajectory_csv(traj_path.string(), *res.trajectory);
                entry["trajectory"] = fs::relative(traj_path, root).string();
            }
            lock["files"].push_back(entry);
            ++index;
        }
    }

    const std::string lock_path = (root / "manifest.lock.json").string();
    save_json_file(lock_path, lock);
    return lock_path;
}

} // namespace magneto
