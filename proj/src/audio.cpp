#include "magneto/audio.hpp"
#include "magneto/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace magneto {

void AudioBuffer::validate() const {
    if (sample_rate <= 0) throw ConfigError("AudioBuffer: sample_rate must be positive");
    if (channels.empty()) throw ConfigError("AudioBuffer: no channels");
    const std::size_t n = channels[0].size();
    for (const auto& c : channels)
        if (c.size() != n) throw ConfigError("AudioBuffer: channel length mismatch");
}

double rms(const std::vector<float>& x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (float v : x) acc += double(v) * double(v);
    return std::sqrt(acc / double(x.size()));
}

double peak_abs(const std::vector<float>& x) {
    double p = 0.0;
    for (float v : x) p = std::max(p, double(std::fabs(v)));
    return p;
}

namespace {

struct Reader {
    std::ifstream in;
    explicit Reader(const std::string& path) : in(path, std::ios::binary) {
        if (!in) throw IoError("cannot open for read: " + path);
    }
    void bytes(void* dst, std::size_t n) {
        in.read(reinterpret_cast<char*>(dst), std::streamsize(n));
        if (std::size_t(in.gcount()) != n) throw IoError("unexpected end of WAV file");
    }
    std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
    std::uint16_t u16() { std::uint16_t v; bytes(&v, 2); return v; }
    void skip(std::uint32_t n) { in.seekg(n, std::ios::cur); }
};

void put_u32(std::ofstream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void put_u16(std::ofstream& out, std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); }

} // namespace

AudioBuffer read_wav(const std::string& path) {
    Reader r(path);
    char tag[4];
    r.bytes(tag, 4);
    if (std::memcmp(tag, "RIFF", 4) != 0) throw IoError(path + ": not a RIFF file");
    r.u32(); // riff size
    r.bytes(tag, 4);
    if (std::memcmp(tag, "WAVE", 4) != 0) throw IoError(path + ": not a WAVE file");

    std::uint16_t format_tag = 0, n_channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    bool have_fmt = false;

    while (true) {
        if (!r.in.read(tag, 4)) throw IoError(path + ": missing data chunk");
        std::uint32_t chunk_size = r.u32();
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            format_tag = r.u16();
            n_channels = r.u16();
            sample_rate = r.u32();
            r.u32(); // byte rate
            r.u16(); // block align
            bits = r.u16();
            if (chunk_size > 16) {
                if (format_tag == 0xFFFE) { // extensible: subformat GUID carries the real tag
                    std::uint16_t ext_size = r.u16();
                    if (ext_size >= 22) {
                        r.u16(); // valid bits
                        r.u32(); // channel mask
                        format_tag = r.u16();
                        r.skip(14);
                        if (ext_size > 22) r.skip(ext_size - 22);
                    } else {
                        r.skip(ext_size);
                    }
                } else {
                    r.skip(chunk_size - 16);
                }
            }
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            if (!have_fmt) throw IoError(path + ": data chunk before fmt");
            if (n_channels < 1 || n_channels > 2)
                throw IoError(path + ": unsupported channel count");
            const std::size_t bytes_per_sample = bits / 8u;
            if (bytes_per_sample == 0) throw IoError(path + ": bad bit depth");
            const std::size_t frames = chunk_size / (bytes_per_sample * n_channels);
            AudioBuffer buf(n_channels, frames, int(sample_rate));
            std::vector<std::uint8_t> raw(chunk_size);
            r.bytes(raw.data(), chunk_size);
            if (format_tag == 1 && bits == 16) {
                const std::int16_t* s = reinterpret_cast<const std::int16_t*>(raw.data());
                for (std::size_t i = 0; i < frames; ++i)
                    for (int c = 0; c < n_channels; ++c)
                        buf.ch(c)[i] = float(s[i * n_channels + c]) / 32768.0f;
            } else if (format_tag == 3 && bits == 32) {
                const float* s = reinterpret_cast<const float*>(raw.data());
                for (std::size_t i = 0; i < frames; ++i)
                    for (int c = 0; c < n_channels; ++c)
                        buf.ch(c)[i] = s[i * n_channels + c];
            } else {
                throw IoError(path + ": unsupported format (want PCM16 or float32)");
            }
            return buf;
        } else {
            r.skip(chunk_size + (chunk_size & 1u));
        }
    }
}

void write_wav(const std::string& path, const AudioBuffer& buf, WavFormat format) {
    buf.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);

    const std::uint16_t n_channels = std::uint16_t(buf.num_channels());
    const std::uint32_t frames = std::uint32_t(buf.length());
    const std::uint16_t bits = format == WavFormat::Pcm16 ? 16 : 32;
    const std::uint16_t block = std::uint16_t(n_channels * bits / 8);
    const std::uint32_t data_size = frames * block;

    out.write("RIFF", 4);
    put_u32(out, 36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(out, 16);
    put_u16(out, format == WavFormat::Pcm16 ? 1 : 3);
    put_u16(out, n_channels);
    put_u32(out, std::uint32_t(buf.sample_rate));
    put_u32(out, std::uint32_t(buf.sample_rate) * block);
    put_u16(out, block);
    put_u16(out, bits);
    out.write("data", 4);
    put_u32(out, data_size);

    if (format == WavFormat::Pcm16) {
        std::vector<std::int16_t> inter(std::size_t(frames) * n_channels);
        for (std::size_t i = 0; i < frames; ++i)
            for (int c = 0; c < n_channels; ++c) {
                float v = std::clamp(buf.ch(c)[i], -1.0f, 1.0f);
                inter[i * n_channels + std::size_t(c)] =
                    std::int16_t(std::lrint(v * 32767.0f));
            }
        out.write(reinterpret_cast<const char*>(inter.data()), std::streamsize(inter.size() * 2));
    } else {
        std::vector<float> inter(std::size_t(frames) * n_channels);
        for (std::size_t i = 0; i < frames; ++i)
            for (int c = 0; c < n_channels; ++c)
                inter[i * n_channels + std::size_t(c)] = buf.ch(c)[i];
        out.write(reinterpret_cast<const char*>(inter.data()), std::streamsize(inter.size() * 4));
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace magneto
