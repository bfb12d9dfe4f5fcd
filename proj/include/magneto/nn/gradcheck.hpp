#pragma once

#include "magneto/nn/params.hpp"
#include "magneto/rng.hpp"

#include <functional>

namespace magneto::nn {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::size_t coords_checked = 0;
    std::string worst_param;
};

// Central finite differences against analytic gradients, over a random
// subset of at least `min_coords` coordinates (all of them when the store
// is small). `loss_fn` must be a pure function of the parameter store.
inline GradCheckReport gradcheck(const std::function<double()>& loss_fn,
                                 ParamStore<double>& params,
                                 const ParamStore<double>& analytic,
                                 double eps = 1e-5,
                                 std::size_t min_coords = 100,
                                 std::uint64_t seed = 1) {
    Rng rng(seed);
    GradCheckReport report;

    const std::size_t total = params.total_values();
    const bool check_all = total <= min_coords;

    for (std::size_t e = 0; e < params.entries().size(); ++e) {
        auto& values = params.entries()[e].values;
        const auto& grad = analytic.entries()[e].values;
        const double keep = check_all ? 1.0 : double(min_coords) / double(total);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!check_all && rng.uniform() > keep) continue;
            const double saved = values[i];
            values[i] = saved + eps;
            const double up = loss_fn();
            values[i] = saved - eps;
            const double down = loss_fn();
            values[i] = saved;
            const double fd = (up - down) / (2.0 * eps);
            const double an = grad[i];
            const double denom = std::max({std::fabs(fd), std::fabs(an), 1e-3});
            const double rel = std::fabs(fd - an) / denom;
            ++report.coords_checked;
            if (rel > report.max_rel_err) {
                report.max_rel_err = rel;
                report.worst_param = params.entries()[e].name;
            }
        }
    }
    return report;
}

} // namespace magneto::nn
