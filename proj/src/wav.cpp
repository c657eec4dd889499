#include "alignkit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace alignkit {

namespace {

uint32_t read_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t read_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

Waveform load_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw WavError(WavErrorKind::IoError, "cannot open: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw WavError(WavErrorKind::MalformedHeader, "malformed WAV: " + path);
    }

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t sample_rate = 0;
    bool have_fmt = false;
    const uint8_t* data = nullptr;
    uint32_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const uint8_t* chunk = bytes.data() + pos;
        uint32_t chunk_size = read_u32(chunk + 4);
        if (pos + 8 + chunk_size > bytes.size()) {
            throw WavError(WavErrorKind::MalformedHeader, "truncated chunk in " + path);
        }
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (chunk_size < 16) {
                throw WavError(WavErrorKind::MalformedHeader, "short fmt chunk in " + path);
            }
            format = read_u16(chunk + 8);
            channels = read_u16(chunk + 10);
            sample_rate = read_u32(chunk + 12);
            bits = read_u16(chunk + 22);
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = chunk + 8;
            data_size = chunk_size;
        }
        pos += 8 + chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) {
        throw WavError(WavErrorKind::MalformedHeader, "malformed WAV: " + path);
    }
    if (channels == 0 || sample_rate == 0) {
        throw WavError(WavErrorKind::MalformedHeader, "malformed fmt chunk in " + path);
    }

    const bool pcm16 = (format == 1 && bits == 16);
    const bool f32 = (format == 3 && bits == 32);
    if (!pcm16 && !f32) {
        throw WavError(WavErrorKind::UnsupportedEncoding,
                       "unsupported WAV encoding (need PCM16 or float32): " + path);
    }

    const uint32_t bytes_per_sample = bits / 8;
    const uint32_t frame_size = bytes_per_sample * channels;
    const uint32_t n_frames = data_size / frame_size;
    if (n_frames == 0) throw WavError(WavErrorKind::EmptyAudio, "empty audio: " + path);

    Waveform w;
    w.sample_rate = static_cast<int>(sample_rate);
    w.samples.resize(n_frames);
    for (uint32_t i = 0; i < n_frames; ++i) {
        const uint8_t* s = data + i * frame_size;  // channel 0
        if (pcm16) {
            int16_t v;
            std::memcpy(&v, s, 2);
            w.samples[i] = static_cast<double>(v) / 32768.0;
        } else {
            float v;
            std::memcpy(&v, s, 4);
            w.samples[i] = v;
        }
    }
    return w;
}

void save_wav(const std::string& path, const Waveform& w) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw WavError(WavErrorKind::IoError, "cannot open for writing: " + path);

    const uint32_t n = static_cast<uint32_t>(w.samples.size());
    const uint32_t data_size = n * 2;
    const uint32_t riff_size = 36 + data_size;

    auto put_u32 = [&](uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_u16 = [&](uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); };

    f.write("RIFF", 4);
    put_u32(riff_size);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    put_u32(16);
    put_u16(1);  // PCM
    put_u16(1);  // mono
    put_u32(static_cast<uint32_t>(w.sample_rate));
    put_u32(static_cast<uint32_t>(w.sample_rate) * 2);
    put_u16(2);
    put_u16(16);
    f.write("data", 4);
    put_u32(data_size);
    for (double s : w.samples) {
        double clamped = std::clamp(s, -1.0, 1.0);
        int16_t v = static_cast<int16_t>(std::lround(clamped * 32767.0));
        f.write(reinterpret_cast<const char*>(&v), 2);
    }
}

}  // namespace alignkit
