#include "magneto/eval/metrics.hpp"
#include "magneto/eval/fft.hpp"
#include "magneto/errors.hpp"

#include <cmath>
#include <complex>

namespace magneto {

double esr_loss(const std::vector<float>& pred, const std::vector<float>& target) {
    if (pred.size() != target.size())
        throw ConfigError("esr_loss: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = double(target[i]) - double(pred[i]);
        num += e * e;
        den += double(target[i]) * double(target[i]);
    }
    if (den <= 0.0) throw ConfigError("esr_loss: all-zero target");
    return num / den;
}

void MrStftConfig::validate() const {
    if (fft_sizes.size() != hop_sizes.size() || fft_sizes.size() != win_lengths.size())
        throw ConfigError("mrstft: resolution lists must have equal length");
    for (std::size_t r = 0; r < fft_sizes.size(); ++r) {
        if (!(hop_sizes[r] < win_lengths[r] && win_lengths[r] <= fft_sizes[r]))
            throw ConfigError("mrstft: need hop < win <= fft per resolution");
    }
}

namespace {

// magnitude STFT frames, Hann window of win_length zero-padded to n_fft
std::vector<std::vector<double>> stft_mag(const std::vector<float>& x, std::size_t n_fft,
                                          std::size_t hop, std::size_t win) {
    const auto w = hann_window(win);
    std::vector<std::vector<double>> frames;
    std::vector<std::complex<double>> buf(n_fft);
    for (std::size_t start = 0; start + win <= x.size(); start += hop) {
        std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
        for (std::size_t i = 0; i < win; ++i)
            buf[i] = double(x[start + i]) * w[i];
        fft(buf);
        std::vector<double> mag(n_fft / 2 + 1);
        for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(buf[i]);
        frames.push_back(std::move(mag));
    }
    return frames;
}

} // namespace

double mrstft_loss(const std::vector<float>& pred, const std::vector<float>& target,
                   const MrStftConfig& cfg) {
    cfg.validate();
    if (pred.size() != target.size())
        throw ConfigError("mrstft_loss: length mismatch");
    std::size_t max_fft = 0;
    for (auto n : cfg.fft_sizes) max_fft = std::max(max_fft, n);
    if (target.size() < max_fft)
        throw ConfigError("mrstft_loss: signals shorter than the largest FFT size");

    double silent_check = 0.0;
    for (float v : target) silent_check += std::fabs(double(v));
    if (silent_check == 0.0) throw ConfigError("mrstft_loss: silent target");

    double total = 0.0;
    for (std::size_t r = 0; r < cfg.fft_sizes.size(); ++r) {
        const auto st = stft_mag(target, cfg.fft_sizes[r], cfg.hop_sizes[r], cfg.win_lengths[r]);
        const auto sp = stft_mag(pred, cfg.fft_sizes[r], cfg.hop_sizes[r], cfg.win_lengths[r]);
        double diff_sq = 0.0, ref_sq = 0.0, log_l1 = 0.0;
        std::size_t count = 0;
        for (std::size_t f = 0; f < st.size(); ++f) {
            for (std::size_t k = 0; k < st[f].size(); ++k) {
                const double t = st[f][k];
                const double p = sp[f][k];
                diff_sq += (t - p) * (t - p);
                ref_sq += t * t;
                const double tf = std::max(t, cfg.magnitude_floor);
                const double pf = std::max(p, cfg.magnitude_floor);
                log_l1 += std::fabs(std::log(tf) - std::log(pf));
                ++count;
            }
        }
        const double sc = std::sqrt(diff_sq) / std::max(std::sqrt(ref_sq), 1e-12);
        const double lm = log_l1 / double(count);
        total += sc + lm;
    }
    return total / double(cfg.fft_sizes.size());
}

} // namespace magneto
