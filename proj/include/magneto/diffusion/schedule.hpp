#pragma once

#include <vector>

namespace magneto::diffusion {

/// Variance-exploding schedule constants.
struct NoiseSchedule {
    double sigma_data = 8e-4;
    double sigma_min = 5e-5;
    double sigma_max = 0.1;
    int n_steps = 16;

    void validate() const;

    static NoiseSchedule hiss() { return {8e-4, 5e-5, 0.1, 16}; }
    static NoiseSchedule trajectory_toy() { return {6.8e-3, 1e-5, 0.5, 10}; }
    static NoiseSchedule trajectory_real() { return {1e-4, 1e-5, 0.01, 10}; }
};

// Geometric ladder sigma_i = sigma_max * (sigma_min/sigma_max)^(i/(n-1)),
// descending; a single sigma_max when n_steps == 1.
std::vector<double> schedule_sigmas(const NoiseSchedule& sched);

struct Precond {
    double c_skip, c_out, c_in, c_noise;
};

// c_skip = sd^2/(s^2+sd^2), c_out = s*sd/sqrt(s^2+sd^2),
// c_in = 1/sqrt(s^2+sd^2), c_noise = ln(s)/4
Precond precondition(double sigma, double sigma_data);

} // namespace magneto::diffusion
