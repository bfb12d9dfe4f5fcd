#include "magneto/delay_line.hpp"

#include <algorithm>
#include <cmath>

namespace magneto {

std::vector<float> apply_time_varying_delay(const std::vector<float>& x,
                                            const std::vector<double>& delay) {
    if (x.size() != delay.size())
        throw ConfigError("apply_time_varying_delay: delay length must match signal length");
    std::vector<float> y(x.size(), 0.0f);
    const std::ptrdiff_t n = std::ptrdiff_t(x.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double d = delay[std::size_t(i)];
        if (d < 0.0) throw ConfigError("apply_time_varying_delay: negative delay");
        const auto taps = delay_taps(d);
        const std::ptrdiff_t lo = i - taps.k_lo;
        const std::ptrdiff_t hi = lo - 1;
        double acc = 0.0;
        if (lo >= 0 && lo < n) acc += taps.w_lo * double(x[std::size_t(lo)]);
        if (hi >= 0 && hi < n) acc += taps.w_hi * double(x[std::size_t(hi)]);
        y[std::size_t(i)] = float(acc);
    }
    return y;
}

std::vector<float> apply_time_varying_delay_reference(const std::vector<float>& x,
                                                      const std::vector<double>& delay,
                                                      int capacity) {
    if (x.size() != delay.size())
        throw ConfigError("apply_time_varying_delay: delay length must match signal length");
    std::vector<float> y(x.size(), 0.0f);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = delay[i];
        if (d > double(capacity))
            throw ConfigError("apply_time_varying_delay: delay exceeds capacity");
        // full dot product against the explicit weight vector
        const auto w = delay_weights(d, capacity);
        double acc = 0.0;
        for (int k = 0; k <= capacity; ++k) {
            const std::ptrdiff_t src = std::ptrdiff_t(i) - (capacity - k);
            if (src >= 0) acc += double(w[std::size_t(k)]) * double(x[std::size_t(src)]);
        }
        y[i] = float(acc);
    }
    return y;
}

std::vector<float> demodulate(const std::vector<float>& y,
                              const std::vector<double>& tau) {
    if (y.size() != tau.size())
        throw ConfigError("demodulate: trajectory must be upsampled to signal length");
    const std::size_t n = y.size();
    std::vector<float> x(n, 0.0f);
    if (n == 0) return x;

    std::vector<double> warped(n);
    for (std::size_t i = 0; i < n; ++i) {
        warped[i] = double(i) - tau[i];
        if (i > 0 && warped[i] < warped[i - 1])
            throw ConfigError("demodulate: warped time decreases (tape reversal)");
    }

    std::size_t j = 0; // warped[j] <= m < warped[j+1]
    for (std::size_t m = 0; m < n; ++m) {
        const double t = double(m);
        if (t < warped.front() || t > warped.back()) continue;
        while (j + 1 < n && warped[j + 1] < t) ++j;
        if (j + 1 >= n) {
            if (t == warped[j]) x[m] = y[j];
            continue;
        }
        const double span = warped[j + 1] - warped[j];
        if (span <= 0.0) { x[m] = y[j]; continue; }
        const double frac = (t - warped[j]) / span;
        x[m] = float((1.0 - frac) * double(y[j]) + frac * double(y[j + 1]));
    }
    return x;
}

} // namespace magneto
