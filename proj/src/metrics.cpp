#include "alignkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace alignkit {

namespace {

double frame_distance(const Matrix& a, std::size_t i, const Matrix& b, std::size_t j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.cols; ++k) {
        const double diff = a(i, k) - b(j, k);
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

}  // namespace

Matrix mel_cepstra(const MelSpectrogram& mel, std::size_t n_coeffs) {
    const std::size_t n_mels = mel.frames.cols;
    require(n_coeffs >= 1 && n_coeffs <= n_mels, "n_coeffs out of range");

    const std::size_t T = mel.frames.rows;
    Matrix out(T, n_coeffs);
    const double scale = std::sqrt(2.0 / static_cast<double>(n_mels));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t k = 1; k <= n_coeffs; ++k) {
            double acc = 0.0;
            for (std::size_t n = 0; n < n_mels; ++n) {
                acc += mel.frames(t, n) *
                       std::cos(std::numbers::pi * static_cast<double>(k) *
                                (static_cast<double>(n) + 0.5) /
                                static_cast<double>(n_mels));
            }
            out(t, k - 1) = scale * acc;
        }
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> dtw_path(const Matrix& a,
                                                          const Matrix& b) {
    require(a.rows >= 1 && b.rows >= 1, "empty sequence");
    require(a.cols == b.cols, "feature dimension mismatch");

    const std::size_t n = a.rows, m = b.rows;
    Matrix cost(n, m, std::numeric_limits<double>::infinity());
    Matrix step(n, m, 0.0);  // 0 = diag, 1 = from (i-1,j), 2 = from (i,j-1)

    cost(0, 0) = frame_distance(a, 0, b, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == 0 && j == 0) continue;
            const double d = frame_distance(a, i, b, j);
            double best = std::numeric_limits<double>::infinity();
            int which = 0;
            if (i > 0 && j > 0 && cost(i - 1, j - 1) < best) {
                best = cost(i - 1, j - 1);
                which = 0;
            }
            if (i > 0 && cost(i - 1, j) < best) {
                best = cost(i - 1, j);
                which = 1;
            }
            if (j > 0 && cost(i, j - 1) < best) {
                best = cost(i, j - 1);
                which = 2;
            }
            cost(i, j) = best + d;
            step(i, j) = which;
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> path;
    std::size_t i = n - 1, j = m - 1;
    path.emplace_back(i, j);
    while (i > 0 || j > 0) {
        const int which = static_cast<int>(step(i, j));
        if (i > 0 && j > 0 && which == 0) {
            --i;
            --j;
        } else if (i > 0 && which == 1) {
            --i;
        } else {
            --j;
        }
        path.emplace_back(i, j);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

MetricReport evaluate_pair(const Waveform& ref, const Waveform& syn,
                           const StftConfig& cfg) {
    require(ref.sample_rate == syn.sample_rate, "sample rate mismatch");
    require(!ref.samples.empty() && !syn.samples.empty(), "empty audio");

    const MelSpectrogram mel_ref = mel_spectrogram(ref, cfg);
    const MelSpectrogram mel_syn = mel_spectrogram(syn, cfg);
    const std::size_t n_coeffs = std::min<std::size_t>(25, mel_ref.frames.cols - 1);
    const Matrix cep_ref = mel_cepstra(mel_ref, n_coeffs);
    const Matrix cep_syn = mel_cepstra(mel_syn, n_coeffs);

    const auto path = dtw_path(cep_ref, cep_syn);

    MetricReport report;
    report.n_aligned_frames = path.size();
    double dist_acc = 0.0;
    for (const auto& [i, j] : path) {
        dist_acc += frame_distance(cep_ref, i, cep_syn, j);
    }
    const double mcd_const = 10.0 / std::numbers::ln10 * std::sqrt(2.0);
    report.mcd = mcd_const * dist_acc / static_cast<double>(path.size());

    std::vector<double> pitch_ref, pitch_syn;
    std::vector<bool> voiced_ref, voiced_syn;
    extract_f0(ref, cfg, pitch_ref, voiced_ref);
    extract_f0(syn, cfg, pitch_syn, voiced_syn);

    double sq_acc = 0.0;
    std::size_t voiced_pairs = 0;
    for (const auto& [i, j] : path) {
        if (voiced_ref[i] && voiced_syn[j]) {
            const double diff = pitch_ref[i] - pitch_syn[j];
            sq_acc += diff * diff;
            ++voiced_pairs;
        }
    }
    report.n_voiced_pairs = voiced_pairs;
    report.f0_rmse =
        voiced_pairs > 0 ? std::sqrt(sq_acc / static_cast<double>(voiced_pairs)) : 0.0;
    return report;
}

MetricReport mcd(const Waveform& ref, const Waveform& syn, const StftConfig& cfg) {
    return evaluate_pair(ref, syn, cfg);
}

MetricReport log_f0_rmse(const Waveform& ref, const Waveform& syn,
                         const StftConfig& cfg) {
    return evaluate_pair(ref, syn, cfg);
}

}  // namespace alignkit
