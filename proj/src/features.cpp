#include "alignkit/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace alignkit {

namespace {

constexpr double kLogFloor = 1e-10;

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT.
void fft_pow2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Magnitude spectrum, bins 0..n/2. Falls back to a direct DFT for sizes
// that are not a power of two.
std::vector<double> magnitude_spectrum(const std::vector<double>& frame) {
    const std::size_t n = frame.size();
    std::vector<double> mag(n / 2 + 1);
    if (is_pow2(n)) {
        std::vector<std::complex<double>> a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = frame[i];
        fft_pow2(a);
        for (std::size_t k = 0; k <= n / 2; ++k) mag[k] = std::abs(a[k]);
    } else {
        for (std::size_t k = 0; k <= n / 2; ++k) {
            double re = 0.0, im = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double ang = -2.0 * std::numbers::pi * static_cast<double>(k * i) /
                             static_cast<double>(n);
                re += frame[i] * std::cos(ang);
                im += frame[i] * std::sin(ang);
            }
            mag[k] = std::hypot(re, im);
        }
    }
    return mag;
}

// Periodic Hann of window_size, centered in an fft_size-long buffer.
std::vector<double> hann_window(int fft_size, int window_size) {
    std::vector<double> w(static_cast<std::size_t>(fft_size), 0.0);
    const int offset = (fft_size - window_size) / 2;
    for (int i = 0; i < window_size; ++i) {
        w[static_cast<std::size_t>(offset + i)] =
            0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / window_size);
    }
    return w;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Filter edge frequencies: n_mels + 2 points equally spaced on the mel scale.
std::vector<double> mel_edge_frequencies(const StftConfig& cfg, int sample_rate) {
    const double mel_lo = hz_to_mel(cfg.fmin);
    const double mel_hi = hz_to_mel(cfg.effective_fmax(sample_rate));
    std::vector<double> hz(static_cast<std::size_t>(cfg.n_mels) + 2);
    for (std::size_t i = 0; i < hz.size(); ++i) {
        hz[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                       static_cast<double>(cfg.n_mels + 1));
    }
    return hz;
}

// Triangular filters with area normalization (2 / bandwidth).
Matrix mel_filterbank(const StftConfig& cfg, int sample_rate) {
    const std::size_t n_bins = static_cast<std::size_t>(cfg.fft_size) / 2 + 1;
    const std::vector<double> edges = mel_edge_frequencies(cfg, sample_rate);
    Matrix fb(static_cast<std::size_t>(cfg.n_mels), n_bins, 0.0);
    for (int m = 0; m < cfg.n_mels; ++m) {
        const double lo = edges[static_cast<std::size_t>(m)];
        const double c = edges[static_cast<std::size_t>(m) + 1];
        const double hi = edges[static_cast<std::size_t>(m) + 2];
        const double norm = 2.0 / (hi - lo);
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double f = static_cast<double>(k) * sample_rate / cfg.fft_size;
            double wgt = 0.0;
            if (f > lo && f < c) {
                wgt = (f - lo) / (c - lo);
            } else if (f >= c && f < hi) {
                wgt = (hi - f) / (hi - c);
            }
            fb(static_cast<std::size_t>(m), k) = wgt * norm;
        }
    }
    return fb;
}

// Reflect-padded sample access: pad amount fft_size/2 on both sides.
double padded_sample(const std::vector<double>& x, long idx) {
    const long n = static_cast<long>(x.size());
    if (n == 1) return x[0];
    while (idx < 0 || idx >= n) {
        if (idx < 0) idx = -idx;
        if (idx >= n) idx = 2 * (n - 1) - idx;
    }
    return x[static_cast<std::size_t>(idx)];
}

// Frame t covers padded samples [t*hop, t*hop + fft_size), i.e. original
// indices [t*hop - fft_size/2, ...).
std::vector<double> extract_frame(const std::vector<double>& x, std::size_t t,
                                  const StftConfig& cfg) {
    std::vector<double> frame(static_cast<std::size_t>(cfg.fft_size));
    const long start = static_cast<long>(t) * cfg.hop_size - cfg.fft_size / 2;
    for (int i = 0; i < cfg.fft_size; ++i) {
        frame[static_cast<std::size_t>(i)] = padded_sample(x, start + i);
    }
    return frame;
}

}  // namespace

void StftConfig::validate(int sample_rate) const {
    const int win = effective_window(sample_rate);
    require(fft_size >= 1 && hop_size >= 1, "fft_size and hop_size must be positive");
    require(hop_size <= win && win <= fft_size,
            "need hop_size <= window_size <= fft_size");
    require(n_mels >= 1, "n_mels must be >= 1");
    const double fmx = effective_fmax(sample_rate);
    require(fmin >= 0.0 && fmin < fmx && fmx <= sample_rate / 2.0,
            "need 0 <= fmin < fmax <= sample_rate/2");
}

std::size_t num_frames(std::size_t n_samples, const StftConfig& cfg) {
    return 1 + n_samples / static_cast<std::size_t>(cfg.hop_size);
}

std::vector<double> mel_center_frequencies(const StftConfig& cfg, int sample_rate) {
    const std::vector<double> edges = mel_edge_frequencies(cfg, sample_rate);
    std::vector<double> centers(static_cast<std::size_t>(cfg.n_mels));
    for (int m = 0; m < cfg.n_mels; ++m) {
        centers[static_cast<std::size_t>(m)] = edges[static_cast<std::size_t>(m) + 1];
    }
    return centers;
}

MelSpectrogram mel_spectrogram(const Waveform& w, const StftConfig& cfg) {
    require(!w.samples.empty(), "empty waveform");
    cfg.validate(w.sample_rate);

    const std::size_t T = num_frames(w.samples.size(), cfg);
    const std::vector<double> window =
        hann_window(cfg.fft_size, cfg.effective_window(w.sample_rate));
    const Matrix fb = mel_filterbank(cfg, w.sample_rate);

    MelSpectrogram mel;
    mel.config = cfg;
    mel.sample_rate = w.sample_rate;
    mel.frames = Matrix(T, static_cast<std::size_t>(cfg.n_mels));

    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> frame = extract_frame(w.samples, t, cfg);
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] *= window[i];
        const std::vector<double> mag = magnitude_spectrum(frame);
        for (std::size_t m = 0; m < fb.rows; ++m) {
            double acc = 0.0;
            for (std::size_t k = 0; k < fb.cols; ++k) acc += fb(m, k) * mag[k];
            mel.frames(t, m) = std::log(std::max(acc, kLogFloor));
        }
    }
    return mel;
}

std::vector<double> extract_energy(const Waveform& w, const StftConfig& cfg) {
    require(!w.samples.empty(), "empty waveform");
    cfg.validate(w.sample_rate);

    const std::size_t T = num_frames(w.samples.size(), cfg);
    const std::vector<double> window =
        hann_window(cfg.fft_size, cfg.effective_window(w.sample_rate));

    std::vector<double> energy(T);
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> frame = extract_frame(w.samples, t, cfg);
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] *= window[i];
        const std::vector<double> mag = magnitude_spectrum(frame);
        double acc = 0.0;
        for (double v : mag) acc += v * v;
        energy[t] = std::sqrt(acc);
    }
    return energy;
}

void extract_f0(const Waveform& w, const StftConfig& cfg,
                std::vector<double>& pitch, std::vector<bool>& voicing) {
    require(!w.samples.empty(), "empty waveform");
    cfg.validate(w.sample_rate);

    constexpr double kF0Min = 70.0;
    constexpr double kF0Max = 400.0;
    constexpr double kClarityThreshold = 0.3;
    constexpr double kRmsThreshold = 1e-4;

    const std::size_t T = num_frames(w.samples.size(), cfg);
    pitch.assign(T, 0.0);
    voicing.assign(T, false);

    const int win = cfg.fft_size;
    const int lag_min = std::max(1, static_cast<int>(std::floor(w.sample_rate / kF0Max)));
    const int lag_max =
        std::min(win - 1, static_cast<int>(std::ceil(w.sample_rate / kF0Min)));
    if (lag_min >= lag_max) return;  // window too short for the search band

    for (std::size_t t = 0; t < T; ++t) {
        const std::vector<double> frame = extract_frame(w.samples, t, cfg);

        double sq = 0.0;
        for (double v : frame) sq += v * v;
        const double rms = std::sqrt(sq / frame.size());
        if (rms < kRmsThreshold) continue;

        // Normalized cross-correlation over the fixed overlap length.
        const int overlap = win - lag_max;
        if (overlap < 16) continue;
        std::vector<double> ncc(static_cast<std::size_t>(lag_max) + 1, 0.0);
        for (int lag = lag_min; lag <= lag_max; ++lag) {
            double dot = 0.0, e0 = 0.0, e1 = 0.0;
            for (int i = 0; i < overlap; ++i) {
                const double a = frame[static_cast<std::size_t>(i)];
                const double b = frame[static_cast<std::size_t>(i + lag)];
                dot += a * b;
                e0 += a * a;
                e1 += b * b;
            }
            const double denom = std::sqrt(e0 * e1);
            ncc[static_cast<std::size_t>(lag)] = denom > 0.0 ? dot / denom : 0.0;
        }

        int best = lag_min;
        for (int lag = lag_min + 1; lag <= lag_max; ++lag) {
            if (ncc[static_cast<std::size_t>(lag)] > ncc[static_cast<std::size_t>(best)]) {
                best = lag;
            }
        }
        // prefer the earliest local peak within 2% of the global maximum;
        // the global argmax often lands on a period multiple
        const double peak_floor = ncc[static_cast<std::size_t>(best)] - 0.02;
        for (int lag = lag_min + 1; lag < best; ++lag) {
            const double v = ncc[static_cast<std::size_t>(lag)];
            if (v >= peak_floor && v >= ncc[static_cast<std::size_t>(lag) - 1] &&
                v >= ncc[static_cast<std::size_t>(lag) + 1]) {
                best = lag;
                break;
            }
        }
        const double clarity = ncc[static_cast<std::size_t>(best)];
        if (clarity < kClarityThreshold) continue;

        // Parabolic refinement around the peak lag.
        double lag_refined = best;
        if (best > lag_min && best < lag_max) {
            const double y0 = ncc[static_cast<std::size_t>(best) - 1];
            const double y1 = ncc[static_cast<std::size_t>(best)];
            const double y2 = ncc[static_cast<std::size_t>(best) + 1];
            const double denom = y0 - 2.0 * y1 + y2;
            if (std::abs(denom) > 1e-12) {
                lag_refined += 0.5 * (y0 - y2) / denom;
            }
        }
        const double f0 = w.sample_rate / lag_refined;
        if (f0 < kF0Min || f0 > kF0Max) continue;

        voicing[t] = true;
        pitch[t] = std::log(f0);
    }
}

FrameVariance extract_frame_variance(const Waveform& w, const StftConfig& cfg) {
    FrameVariance fv;
    extract_f0(w, cfg, fv.pitch, fv.voicing);
    fv.energy = extract_energy(w, cfg);
    return fv;
}

}  // namespace alignkit
