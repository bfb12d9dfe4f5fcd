#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace magneto {

/// Uniformly sampled audio, one vector per channel (all equal length).
struct AudioBuffer {
    std::vector<std::vector<float>> channels;
    int sample_rate = 44100;

    AudioBuffer() = default;
    AudioBuffer(int n_channels, std::size_t length, int fs)
        : channels(n_channels, std::vector<float>(length, 0.0f)), sample_rate(fs) {}

    std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
    int num_channels() const { return int(channels.size()); }
    bool mono() const { return channels.size() == 1; }

    std::vector<float>& ch(int i) { return channels[std::size_t(i)]; }
    const std::vector<float>& ch(int i) const { return channels[std::size_t(i)]; }

    void validate() const; // equal channel lengths, positive rate
};

enum class WavFormat { Pcm16, Float32 };

AudioBuffer read_wav(const std::string& path);
void write_wav(const std::string& path, const AudioBuffer& buf,
               WavFormat format = WavFormat::Float32);

double rms(const std::vector<float>& x);
double peak_abs(const std::vector<float>& x);

} // namespace magneto
