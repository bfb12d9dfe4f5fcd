#include "magneto/eval/analysis.hpp"
#include "magneto/eval/fft.hpp"
#include "magneto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace magneto {

static constexpr double kPi = 3.14159265358979323846;

RampedSineResult ramped_sine_analysis(const SystemFn& system, double f0_hz, int cycles,
                                      double peak, int sample_rate) {
    if (cycles < 2) throw ConfigError("ramped_sine: need at least 2 cycles");
    const double spf = double(sample_rate) / f0_hz;
    const std::size_t samples_per_cycle = std::size_t(std::llround(spf));
    if (std::fabs(spf - double(samples_per_cycle)) > 1e-6)
        throw ConfigError("ramped_sine: sample rate must be an integer multiple of f0");

    const std::size_t total = samples_per_cycle * std::size_t(cycles);
    std::vector<float> x(total);
    for (std::size_t n = 0; n < total; ++n) {
        const double amp = peak * double(n + 1) / double(total);
        x[n] = float(amp * std::sin(2.0 * kPi * f0_hz * double(n) / sample_rate));
    }
    const std::vector<float> y = system(x);
    if (y.size() != total) throw ConfigError("ramped_sine: system changed signal length");

    RampedSineResult res;
    res.cycles.resize(std::size_t(cycles));
    for (int c = 0; c < cycles; ++c) {
        auto& cyc = res.cycles[std::size_t(c)];
        const std::size_t off = std::size_t(c) * samples_per_cycle;
        cyc.input.assign(x.begin() + std::ptrdiff_t(off),
                         x.begin() + std::ptrdiff_t(off + samples_per_cycle));
        cyc.output.assign(y.begin() + std::ptrdiff_t(off),
                          y.begin() + std::ptrdiff_t(off + samples_per_cycle));
    }

    const auto& last = res.cycles.back();
    const std::size_t m = last.input.size();

    // shoelace area of the closed (input, output) polygon
    double area = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = (i + 1) % m;
        area += double(last.input[i]) * double(last.output[j]) -
                double(last.input[j]) * double(last.output[i]);
    }
    res.loop_area = 0.5 * std::fabs(area);

    for (std::size_t i = 0; i < m; ++i)
        res.saturation_level = std::max(res.saturation_level, std::fabs(double(last.output[i])));

    // zero crossings of the output, one per branch (rising / falling input)
    double x_rise = 0.0, x_fall = 0.0;
    bool have_rise = false, have_fall = false;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double y0 = last.output[i];
        const double y1 = last.output[i + 1];
        if ((y0 <= 0.0 && y1 > 0.0) || (y0 >= 0.0 && y1 < 0.0)) {
            const double frac = y1 == y0 ? 0.0 : -y0 / (y1 - y0);
            const double xc = double(last.input[i]) +
                              frac * (double(last.input[i + 1]) - double(last.input[i]));
            const bool rising = double(last.input[i + 1]) > double(last.input[i]);
            if (rising && !have_rise) { x_rise = xc; have_rise = true; }
            if (!rising && !have_fall) { x_fall = xc; have_fall = true; }
        }
    }
    res.loop_width = (have_rise && have_fall) ? std::fabs(x_rise - x_fall) : 0.0;

    // slopes: least-squares dy/dx near zero input vs near the input peak
    auto fit_slope = [&](double lo, double hi) {
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double xi = last.input[i];
            if (std::fabs(xi) < lo || std::fabs(xi) > hi) continue;
            sxx += xi * xi;
            sxy += xi * double(last.output[i]);
        }
        return sxx > 0.0 ? sxy / sxx : 0.0;
    };
    const double a_max = peak;
    res.origin_slope = fit_slope(0.0, 0.1 * a_max);
    res.large_signal_slope = fit_slope(0.5 * a_max, 0.9 * a_max);
    return res;
}

void SweepSpec::validate(int sample_rate) const {
    if (!(0.0 < f_start_hz && f_start_hz < f_end_hz && f_end_hz < 0.5 * sample_rate))
        throw ConfigError("sweep: need 0 < f_start < f_end < fs/2");
    if (duration_s * f_start_hz < 10.0)
        throw ConfigError("sweep: duration too short for f_start");
}

SweptSineResult swept_sine_analysis(const SystemFn& system, const SweepSpec& spec,
                                    int sample_rate) {
    spec.validate(sample_rate);
    const double fs = sample_rate;
    const double rate_log = std::log(spec.f_end_hz / spec.f_start_hz);
    const double sweep_time_const = spec.duration_s / rate_log; // Farina's L
    const std::size_t n = std::size_t(std::llround(spec.duration_s * fs));

    const double window_s = 0.05; // per-harmonic Tukey window
    // harmonic arrival spacing shrinks with order; 5th..4th is the tightest
    const double min_gap = sweep_time_const * std::log(5.0 / 4.0);
    if (min_gap < window_s)
        throw ConfigError("sweep: too short, harmonic windows would overlap");

    std::vector<float> probe(n);
    std::vector<double> probe_d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i) / fs;
        const double phase =
            2.0 * kPi * spec.f_start_hz * sweep_time_const * (std::exp(t / sweep_time_const) - 1.0);
        probe_d[i] = std::sin(phase);
    }
    // short raised-cosine edges against spectral splatter
    const std::size_t fade = std::size_t(0.005 * fs);
    for (std::size_t i = 0; i < fade && i < n; ++i) {
        const double g = 0.5 - 0.5 * std::cos(kPi * double(i) / double(fade));
        probe_d[i] *= g;
        probe_d[n - 1 - i] *= g;
    }
    for (std::size_t i = 0; i < n; ++i) probe[i] = float(spec.amplitude * probe_d[i]);

    // inverse filter: time-reversed sweep with exponential amplitude compensation
    std::vector<double> inverse(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i) / fs;
        inverse[i] = probe_d[n - 1 - i] * std::exp(-t / sweep_time_const);
    }

    // self-calibration: identity response must deconvolve to a unit peak
    std::vector<double> ident(probe.size());
    for (std::size_t i = 0; i < n; ++i) ident[i] = spec.amplitude * probe_d[i];
    const auto cal = fft_convolve(ident, inverse);
    double cal_peak = 0.0;
    std::size_t lin_pos = 0;
    for (std::size_t i = 0; i < cal.size(); ++i)
        if (std::fabs(cal[i]) > cal_peak) { cal_peak = std::fabs(cal[i]); lin_pos = i; }
    if (cal_peak <= 0.0) throw ConfigError("sweep: degenerate probe");
    const double scale = 1.0 / cal_peak;

    const std::vector<float> y = system(probe);
    if (y.size() != n) throw ConfigError("sweep: system changed signal length");
    std::vector<double> yd(n);
    for (std::size_t i = 0; i < n; ++i) yd[i] = spec.amplitude != 0.0
        ? double(y[i]) / spec.amplitude : double(y[i]);
    auto ir = fft_convolve(yd, inverse);
    for (auto& v : ir) v *= scale;

    const std::size_t half_win = std::size_t(0.5 * window_s * fs);
    const std::size_t n_fft = next_pow2(2 * half_win + 1);

    auto window_ir = [&](std::ptrdiff_t center) {
        std::vector<double> seg(2 * half_win + 1, 0.0);
        for (std::size_t i = 0; i < seg.size(); ++i) {
            const std::ptrdiff_t src = center - std::ptrdiff_t(half_win) + std::ptrdiff_t(i);
            if (src < 0 || src >= std::ptrdiff_t(ir.size())) continue;
            // Tukey 0.5
            const double u = double(i) / double(seg.size() - 1);
            double w = 1.0;
            if (u < 0.25) w = 0.5 - 0.5 * std::cos(4.0 * kPi * u);
            else if (u > 0.75) w = 0.5 - 0.5 * std::cos(4.0 * kPi * (1.0 - u));
            seg[i] = ir[std::size_t(src)] * w;
        }
        return real_fft_magnitude(seg, n_fft);
    };

    SweptSineResult res;
    const auto lin = window_ir(std::ptrdiff_t(lin_pos));
    res.freqs_hz.resize(lin.size());
    res.magnitude_db.resize(lin.size());
    for (std::size_t k = 0; k < lin.size(); ++k) {
        res.freqs_hz[k] = fs * double(k) / double(n_fft);
        res.magnitude_db[k] = 20.0 * std::log10(std::max(lin[k], 1e-12));
    }
    for (int order = 2; order <= 5; ++order) {
        const double advance_s = sweep_time_const * std::log(double(order));
        const std::ptrdiff_t center = std::ptrdiff_t(lin_pos) -
                                      std::ptrdiff_t(std::llround(advance_s * fs));
        const auto mag = window_ir(center);
        auto& h = res.harmonics_db[order];
        h.resize(mag.size());
        for (std::size_t k = 0; k < mag.size(); ++k)
            h[k] = 20.0 * std::log10(std::max(mag[k], 1e-12));
    }
    return res;
}

std::vector<BandLevel> long_term_spectrum(const std::vector<float>& x, int sample_rate,
                                          int fraction) {
    if (double(x.size()) < sample_rate) throw ConfigError("long_term_spectrum: need >= 1 s of signal");
    std::size_t n_fft = 8192;
    while (n_fft > x.size()) n_fft /= 2;

    const auto w = hann_window(n_fft);
    double wsumsq = 0.0;
    for (double v : w) wsumsq += v * v;

    std::vector<double> psd(n_fft / 2 + 1, 0.0);
    std::size_t frames = 0;
    std::vector<std::complex<double>> buf(n_fft);
    for (std::size_t start = 0; start + n_fft <= x.size(); start += n_fft / 2) {
        for (std::size_t i = 0; i < n_fft; ++i)
            buf[i] = double(x[start + i]) * w[i];
        fft(buf);
        for (std::size_t k = 0; k < psd.size(); ++k) {
            double p = std::norm(buf[k]) / (wsumsq * double(n_fft));
            if (k != 0 && k != n_fft / 2) p *= 2.0; // one-sided
            psd[k] += p;
        }
        ++frames;
    }
    if (frames == 0) throw ConfigError("long_term_spectrum: signal too short");
    for (auto& p : psd) p /= double(frames);
    // psd now sums to the mean signal power

    // fractional-octave band edges around 1 kHz anchors
    const double fs = sample_rate;
    const double step = std::pow(2.0, 1.0 / double(fraction));
    const double half = std::pow(2.0, 0.5 / double(fraction));
    std::vector<double> centers;
    double c = 1000.0;
    while (c / half > 16.0) c /= step;
    for (; c * 1.0 < fs / 2.0; c *= step) centers.push_back(c);
    if (centers.empty()) throw ConfigError("long_term_spectrum: no bands below Nyquist");

    std::vector<BandLevel> bands(centers.size());
    for (std::size_t b = 0; b < centers.size(); ++b)
        bands[b] = {centers[b], -300.0, 0.0};

    const double bin_hz = fs / double(n_fft);
    for (std::size_t k = 0; k < psd.size(); ++k) {
        const double f = double(k) * bin_hz;
        // every bin lands in exactly one band so total power is conserved
        std::size_t b = 0;
        if (f > centers.front() * half) {
            const double ratio = f / centers.front();
            b = std::size_t(std::floor(std::log(ratio) / std::log(step) + 0.5));
            b = std::min(b, centers.size() - 1);
        }
        bands[b].power += psd[k];
    }
    for (auto& band : bands)
        band.level_db = 10.0 * std::log10(std::max(band.power, 1e-30));
    return bands;
}

TrajectorySpectrumStats trajectory_spectrum_stats(const std::vector<std::vector<double>>& batch,
                                                  double rate_hz) {
    if (batch.size() < 2) throw ConfigError("trajectory_spectrum_stats: need a batch of >= 2");
    const std::size_t len = batch.front().size();
    for (const auto& t : batch)
        if (t.size() != len) throw ConfigError("trajectory_spectrum_stats: unequal lengths");

    const std::size_t n_fft = next_pow2(len) * 4;
    const auto w = hann_window(len);

    TrajectorySpectrumStats stats;
    stats.freqs_hz.resize(n_fft / 2 + 1);
    for (std::size_t k = 0; k < stats.freqs_hz.size(); ++k)
        stats.freqs_hz[k] = rate_hz * double(k) / double(n_fft);

    std::vector<std::vector<double>> spectra;
    spectra.reserve(batch.size());
    for (const auto& t : batch) {
        double mean = 0.0;
        for (double v : t) mean += v;
        mean /= double(len);
        std::vector<double> seg(len);
        for (std::size_t i = 0; i < len; ++i) seg[i] = (t[i] - mean) * w[i];
        auto mag = real_fft_magnitude(seg, n_fft);
        for (auto& v : mag) v = 20.0 * std::log10(std::max(v, 1e-12));
        spectra.push_back(std::move(mag));
    }

    const std::size_t bins = stats.freqs_hz.size();
    stats.mean_db.assign(bins, 0.0);
    stats.std_db.assign(bins, 0.0);
    for (const auto& s : spectra)
        for (std::size_t k = 0; k < bins; ++k) stats.mean_db[k] += s[k];
    for (auto& v : stats.mean_db) v /= double(spectra.size());
    for (const auto& s : spectra)
        for (std::size_t k = 0; k < bins; ++k) {
            const double d = s[k] - stats.mean_db[k];
            stats.std_db[k] += d * d;
        }
    for (auto& v : stats.std_db) v = std::sqrt(v / double(spectra.size()));
    return stats;
}

double spectrum_peak_hz(const std::vector<double>& freqs, const std::vector<double>& level_db) {
    if (freqs.size() != level_db.size() || freqs.size() < 3)
        throw ConfigError("spectrum_peak_hz: bad inputs");
    std::size_t p = 1;
    for (std::size_t k = 1; k + 1 < level_db.size(); ++k)
        if (level_db[k] > level_db[p]) p = k;
    const double y0 = level_db[p - 1], y1 = level_db[p], y2 = level_db[p + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double off = 0.0;
    if (std::fabs(denom) > 1e-12) off = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
    const double bin = freqs[1] - freqs[0];
    return freqs[p] + off * bin;
}

void write_analysis_csv(const std::string& path, const std::string& meta_json,
                        const std::vector<std::string>& column_names,
                        const std::vector<std::vector<double>>& columns) {
    if (column_names.size() != columns.size() || columns.empty())
        throw ConfigError("write_analysis_csv: column mismatch");
    const std::size_t rows = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ConfigError("write_analysis_csv: ragged columns");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    out << "# meta: " << meta_json << "\n";
    for (std::size_t i = 0; i < column_names.size(); ++i)
        out << column_names[i] << (i + 1 < column_names.size() ? ',' : '\n');
    char cell[64];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            std::snprintf(cell, sizeof cell, "%.10g", columns[i][r]);
            out << cell << (i + 1 < columns.size() ? ',' : '\n');
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace magneto
