#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace magneto {

// In-place iterative radix-2 FFT. n must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse = false);

std::size_t next_pow2(std::size_t n);

// Magnitude spectrum of a real signal zero-padded to n_fft (power of two),
// bins 0..n_fft/2 inclusive.
std::vector<double> real_fft_magnitude(const std::vector<double>& x, std::size_t n_fft);

// Linear convolution via FFT (sizes padded internally).
std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b);

std::vector<double> hann_window(std::size_t n);

} // namespace magneto
