#include "magneto/trajectory.hpp"
#include "magneto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace magneto {

double DelayTrajectory::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

double DelayTrajectory::mean_value() const {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / double(values.size());
}

void DelayTrajectory::validate() const {
    if (rate_hz <= 0.0) throw ConfigError("DelayTrajectory: rate must be positive");
    if (audio_sample_rate <= 0) throw ConfigError("DelayTrajectory: audio rate must be positive");
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("DelayTrajectory: non-finite value");
        if (v < 0.0) throw ConfigError("DelayTrajectory: negative delay");
    }
}

void write_trajectory_csv(const std::string& path, const DelayTrajectory& traj) {
    std::ofstream out(path, std::ios::binary); // binary: keep LF endings everywhere
    if (!out) throw IoError("cannot open for write: " + path);
    out << "rate_hz,audio_sample_rate\n";
    char line[64];
    std::snprintf(line, sizeof line, "%.10g,%d\n", traj.rate_hz, traj.audio_sample_rate);
    out << line;
    for (double v : traj.values) {
        std::snprintf(line, sizeof line, "%.10g\n", v);
        out << line;
    }
    if (!out) throw IoError("write failed: " + path);
}

DelayTrajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for read: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty trajectory file");
    if (line.rfind("rate_hz", 0) != 0)
        throw IoError(path + ": missing rate_hz,audio_sample_rate header");
    if (!std::getline(in, line)) throw IoError(path + ": missing rates line");
    DelayTrajectory traj;
    {
        std::istringstream ss(line);
        char comma = 0;
        if (!(ss >> traj.rate_hz >> comma >> traj.audio_sample_rate) || comma != ',')
            throw IoError(path + ": malformed rates line");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        traj.values.push_back(std::stod(line));
    }
    traj.validate();
    return traj;
}

std::vector<double> upsample_trajectory(const DelayTrajectory& traj, int fs,
                                        std::size_t length) {
    if (traj.values.empty()) throw ConfigError("upsample_trajectory: empty trajectory");
    std::vector<double> out(length);
    const double step = double(fs) / traj.rate_hz; // audio samples per trajectory point
    const std::size_t n = traj.values.size();
    for (std::size_t i = 0; i < length; ++i) {
        const double pos = double(i) / step;
        if (pos <= 0.0) { out[i] = traj.values.front(); continue; }
        if (pos >= double(n - 1)) { out[i] = traj.values.back(); continue; }
        const std::size_t k = std::size_t(pos);
        const double frac = pos - double(k);
        out[i] = traj.values[k] + frac * (traj.values[k + 1] - traj.values[k]);
    }
    return out;
}

} // namespace magneto
