#pragma once

#include <vector>

#include "alignkit/matrix.hpp"
#include "alignkit/wav.hpp"

namespace alignkit {

struct StftConfig {
    int fft_size = 1024;
    int hop_size = 256;
    int window_size = 0;  // 0 means fft_size
    int n_mels = 80;
    double fmin = 0.0;
    double fmax = 0.0;  // 0 means sample_rate / 2

    int effective_window(int /*sample_rate*/) const {
        return window_size > 0 ? window_size : fft_size;
    }
    double effective_fmax(int sample_rate) const {
        return fmax > 0.0 ? fmax : sample_rate / 2.0;
    }
    void validate(int sample_rate) const;
};

struct MelSpectrogram {
    Matrix frames;  // T x n_mels, natural-log magnitudes
    StftConfig config;
    int sample_rate = 0;
};

struct FrameVariance {
    std::vector<double> pitch;   // log-Hz, 0 where unvoiced
    std::vector<bool> voicing;
    std::vector<double> energy;  // L2 magnitude of the STFT frame
};

// T = 1 + floor(len / hop) under reflect center padding by fft_size/2.
std::size_t num_frames(std::size_t n_samples, const StftConfig& cfg);

// Hann window, reflect center padding, triangular area-normalized mel
// filterbank, log floor 1e-10.
MelSpectrogram mel_spectrogram(const Waveform& w, const StftConfig& cfg);

// Normalized autocorrelation F0 over [70, 400] Hz; voiced iff peak
// clarity >= 0.3 and frame RMS >= 1e-4. Pitch in natural-log Hz.
void extract_f0(const Waveform& w, const StftConfig& cfg,
                std::vector<double>& pitch, std::vector<bool>& voicing);

// energy[t] = L2 norm of the magnitude STFT frame t.
std::vector<double> extract_energy(const Waveform& w, const StftConfig& cfg);

FrameVariance extract_frame_variance(const Waveform& w, const StftConfig& cfg);

// Center frequencies (Hz) of the mel filters for this configuration.
std::vector<double> mel_center_frequencies(const StftConfig& cfg, int sample_rate);

}  // namespace alignkit
