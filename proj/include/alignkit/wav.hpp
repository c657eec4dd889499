#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace alignkit {

struct Waveform {
    std::vector<double> samples;  // [-1, 1]
    int sample_rate = 0;
};

// Distinct failure modes of the WAV reader.
enum class WavErrorKind { MalformedHeader, UnsupportedEncoding, EmptyAudio, IoError };

class WavError : public std::runtime_error {
public:
    WavError(WavErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    WavErrorKind kind() const { return kind_; }

private:
    WavErrorKind kind_;
};

// RIFF/WAVE reader: PCM16 and IEEE-float32, little-endian.
// Multi-channel input takes channel 0.
Waveform load_wav(const std::string& path);

// Writes mono PCM16. Used by the test suites and example pipelines.
void save_wav(const std::string& path, const Waveform& w);

}  // namespace alignkit
