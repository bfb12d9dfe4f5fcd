#pragma once

#include "magneto/audio.hpp"
#include "magneto/diffusion/schedule.hpp"
#include "magneto/nn/checkpoint.hpp"
#include "magneto/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace magneto::diffusion {

using DenoiserFn =
    std::function<void(const double* x, std::size_t n, double sigma, double* d_out)>;

// Reverse diffusion over the geometric sigma ladder; the final step targets
// sigma = 0. churn = 0 is the deterministic DDIM update
//   x <- x + (sigma_next - sigma) (x - D(x; sigma)) / sigma;
// churn in (0, 1] blends in ancestral-style fresh noise per step, which
// counteracts the over-denoising of coarse deterministic ladders.
std::vector<double> ddim_sample(const DenoiserFn& denoiser, const NoiseSchedule& sched,
                                double churn, std::size_t length, std::uint64_t seed);

inline constexpr double kDefaultChurn = 1.0;
inline constexpr const char* kHissArch = "hiss-unet-v1";
inline constexpr const char* kTrajArch = "traj-unet-v1";

// The sampler-facing denoiser from a diffusion checkpoint (EMA weights).
DenoiserFn checkpoint_denoiser(const nn::Checkpoint& ckpt);

// Layered chunk generation: segments at the domain length, 25% overlap,
// equal-power crossfade.
std::vector<double> generate_chunked(const DenoiserFn& denoiser, const NoiseSchedule& sched,
                                     double churn, std::size_t segment_len,
                                     std::size_t total_len, std::uint64_t seed,
                                     int n_steps_override = 0);

// Hiss: duration seconds at the checkpoint sample rate.
AudioBuffer generate_noise(const nn::Checkpoint& ckpt, double duration_s, std::uint64_t seed,
                           int n_steps_override = 0, double churn = kDefaultChurn);

// Trajectory: mean-normalized fluctuations plus mean_delay, clamped at 0.
// Warns on stderr when clamping hits more than 1% of points.
DelayTrajectory generate_trajectory(const nn::Checkpoint& ckpt, std::size_t n_points,
                                    double mean_delay, std::uint64_t seed,
                                    int n_steps_override = 0, double churn = kDefaultChurn);

} // namespace magneto::diffusion
