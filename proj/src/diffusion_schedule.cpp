#include "magneto/diffusion/schedule.hpp"
#include "magneto/errors.hpp"

#include <cmath>

namespace magneto::diffusion {

void NoiseSchedule::validate() const {
    if (!(0.0 < sigma_min && sigma_min < sigma_max))
        throw ConfigError("schedule: need 0 < sigma_min < sigma_max");
    if (sigma_data <= 0.0) throw ConfigError("schedule: sigma_data must be positive");
    if (n_steps < 1) throw ConfigError("schedule: n_steps must be >= 1");
}

std::vector<double> schedule_sigmas(const NoiseSchedule& sched) {
    sched.validate();
    if (sched.n_steps == 1) return {sched.sigma_max};
    std::vector<double> sigmas(std::size_t(sched.n_steps));
    const double ratio = sched.sigma_min / sched.sigma_max;
    for (int i = 0; i < sched.n_steps; ++i)
        sigmas[std::size_t(i)] =
            sched.sigma_max * std::pow(ratio, double(i) / double(sched.n_steps - 1));
    sigmas.front() = sched.sigma_max;
    sigmas.back() = sched.sigma_min;
    return sigmas;
}

Precond precondition(double sigma, double sigma_data) {
    if (sigma <= 0.0) throw ConfigError("precondition: sigma must be positive");
    const double s2 = sigma * sigma;
    const double d2 = sigma_data * sigma_data;
    Precond p;
    p.c_skip = d2 / (s2 + d2);
    p.c_out = sigma * sigma_data / std::sqrt(s2 + d2);
    p.c_in = 1.0 / std::sqrt(s2 + d2);
    p.c_noise = std::log(sigma) / 4.0;
    return p;
}

} // namespace magneto::diffusion
