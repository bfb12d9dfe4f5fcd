#include "magneto/pulse.hpp"
#include "magneto/errors.hpp"

#include <algorithm>
#include <cmath>

namespace magneto {

int PulseTrainSpec::spacing_samples() const {
    const double spacing = double(sample_rate) / pulse_rate_hz;
    const double rounded = std::round(spacing);
    if (std::fabs(spacing - rounded) > 1e-9 || rounded < 1.0)
        throw ConfigError("pulse train: sample_rate must be an integer multiple of pulse rate");
    return int(rounded);
}

void PulseTrainSpec::validate() const {
    if (sample_rate <= 0) throw ConfigError("pulse train: sample_rate must be positive");
    if (pulse_rate_hz <= 0.0) throw ConfigError("pulse train: pulse rate must be positive");
    if (amplitude <= 0.0) throw ConfigError("pulse train: amplitude must be positive");
    if (duration_s <= 0.0) throw ConfigError("pulse train: duration must be positive");
    spacing_samples();
}

AudioBuffer generate_pulse_train(const PulseTrainSpec& spec) {
    spec.validate();
    const int spacing = spec.spacing_samples();
    const std::size_t length = std::size_t(std::llround(spec.duration_s * spec.sample_rate));
    AudioBuffer buf(1, length, spec.sample_rate);
    for (std::size_t i = 0; i < length; i += std::size_t(spacing))
        buf.ch(0)[i] = float(spec.amplitude);
    return buf;
}

namespace {

// 3-point parabolic peak refinement on magnitudes around index p.
double refine_peak(const std::vector<float>& x, std::size_t p) {
    if (p == 0 || p + 1 >= x.size()) return double(p);
    const double y0 = std::fabs(double(x[p - 1]));
    const double y1 = std::fabs(double(x[p]));
    const double y2 = std::fabs(double(x[p + 1]));
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::fabs(denom) < 1e-12) return double(p);
    double off = 0.5 * (y0 - y2) / denom;
    off = std::clamp(off, -0.5, 0.5);
    return double(p) + off;
}

} // namespace

PulseDetection detect_pulses(const std::vector<float>& x, const PulseTrainSpec& spec,
                             double threshold) {
    spec.validate();
    if (x.empty()) throw MeasureError("detect_pulses: empty buffer");
    if (threshold <= 0.0 || threshold >= spec.amplitude)
        throw ConfigError("detect_pulses: threshold must lie in (0, amplitude)");

    const int spacing = spec.spacing_samples();
    const std::size_t n_windows = (x.size() + std::size_t(spacing) - 1) / std::size_t(spacing);

    PulseDetection det;
    det.times.reserve(n_windows);

    double expected = 0.0; // running estimate of the next pulse position
    for (std::size_t k = 0; k < n_windows; ++k) {
        std::ptrdiff_t lo, hi; // [lo, hi) search window
        if (k == 0) {
            lo = 0;
            hi = spacing;
        } else {
            lo = std::ptrdiff_t(std::llround(expected)) - spacing / 2;
            hi = lo + spacing;
        }
        lo = std::max<std::ptrdiff_t>(lo, 0);
        hi = std::min<std::ptrdiff_t>(hi, std::ptrdiff_t(x.size()));

        std::size_t best = std::size_t(lo);
        double best_mag = -1.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            const double mag = std::fabs(double(x[std::size_t(i)]));
            if (mag > best_mag) { best_mag = mag; best = std::size_t(i); }
        }

        if (best_mag < threshold) {
            det.gaps.push_back(k);
            det.times.push_back(expected);
            expected += spacing;
            continue;
        }
        const double t = refine_peak(x, best);
        det.times.push_back(t);
        expected = t + spacing;
    }
    return det;
}

DelayTrajectory extract_trajectory(const PulseDetection& input_times,
                                   const PulseDetection& output_times,
                                   const PulseTrainSpec& spec,
                                   std::vector<std::size_t>* filled) {
    if (input_times.times.size() != output_times.times.size())
        throw MeasureError("extract_trajectory: pulse count mismatch");
    const std::size_t n = input_times.times.size();
    if (n == 0) throw MeasureError("extract_trajectory: no pulses");

    std::vector<bool> gap(n, false);
    for (std::size_t g : input_times.gaps) gap[g] = true;
    for (std::size_t g : output_times.gaps) gap[g] = true;

    std::size_t n_valid = 0;
    DelayTrajectory traj;
    traj.rate_hz = spec.pulse_rate_hz;
    traj.audio_sample_rate = spec.sample_rate;
    traj.values.assign(n, 0.0);

    double prev_in = -1.0, prev_out = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (gap[k]) continue;
        const double ti = input_times.times[k];
        const double to = output_times.times[k];
        if (ti <= prev_in || to <= prev_out)
            throw MeasureError("extract_trajectory: non-monotone pulse times");
        prev_in = ti;
        prev_out = to;
        const double d = to - ti;
        if (d < 0.0)
            throw MeasureError("extract_trajectory: negative delay (misdetection)");
        traj.values[k] = d;
        ++n_valid;
    }
    if (n_valid == 0) throw MeasureError("extract_trajectory: no pulses detected");

    // Fill gaps from neighbouring delays, constant toward the ends.
    std::ptrdiff_t last_valid = -1;
    for (std::size_t k = 0; k < n; ++k) {
        if (!gap[k]) { last_valid = std::ptrdiff_t(k); continue; }
        if (filled) filled->push_back(k);
        std::size_t next = k + 1;
        while (next < n && gap[next]) ++next;
        if (last_valid < 0 && next >= n) continue; // unreachable: n_valid > 0
        if (last_valid < 0) {
            traj.values[k] = traj.values[next];
        } else if (next >= n) {
            traj.values[k] = traj.values[std::size_t(last_valid)];
        } else {
            const double a = traj.values[std::size_t(last_valid)];
            const double b = traj.values[next];
            const double frac = double(k - std::size_t(last_valid)) /
                                double(next - std::size_t(last_valid));
            traj.values[k] = a + frac * (b - a);
        }
    }
    traj.validate();
    return traj;
}

} // namespace magneto
